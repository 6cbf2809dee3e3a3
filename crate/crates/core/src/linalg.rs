//! Dense symmetric matrices, eigendecomposition and the PSD separation oracle.
//!
//! Everything downstream (relaxation models, rounding, deflation) goes through
//! [`SymMatrix`], which keeps its entries exactly symmetric. Eigenpairs are
//! returned in descending order with a canonical sign so that repeated runs on
//! the same input produce bit-identical output.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`SymMatrix::from_dmatrix`] before rejecting the input.
pub const ASYMMETRY_TOL: f64 = 1e-6;

/// A dense real symmetric matrix with value semantics.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    data: DMatrix<f64>,
    asymmetry: f64,
}

impl SymMatrix {
    /// The `n x n` zero matrix. Panics when `n == 0`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "SymMatrix dimension must be at least 1");
        Self {
            data: DMatrix::zeros(n, n),
            asymmetry: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "SymMatrix dimension must be at least 1");
        Self {
            data: DMatrix::identity(n, n),
            asymmetry: 0.0,
        }
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        assert!(n >= 1, "SymMatrix dimension must be at least 1");
        Self {
            data: DMatrix::from_element(n, n, 1.0),
            asymmetry: 0.0,
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        assert!(!diag.is_empty(), "SymMatrix dimension must be at least 1");
        Self {
            data: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
            asymmetry: 0.0,
        }
    }

    /// Builds a matrix from the upper triangle produced by `f(i, j)` with `i <= j`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// `alpha * v v^T`.
    pub fn outer(v: &DVector<f64>, alpha: f64) -> Self {
        let mut m = Self::zeros(v.len());
        m.add_outer(alpha, v);
        m
    }

    /// Wraps a square matrix, symmetrizing it as `(A + A^T) / 2`.
    ///
    /// Rejects non-finite entries and asymmetry above `ASYMMETRY_TOL * ||A||_F`.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidMatrix("matrix is empty".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let n = m.nrows();
        let mut asymmetry: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                asymmetry = asymmetry.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        let fro = m.norm();
        if asymmetry > ASYMMETRY_TOL * fro {
            return Err(Error::InvalidMatrix(format!(
                "asymmetry {asymmetry:.3e} exceeds tolerance {:.3e}",
                ASYMMETRY_TOL * fro
            )));
        }
        let data = (&m + m.transpose()) * 0.5;
        Ok(Self { data, asymmetry })
    }

    /// Row-major `n x n` slice.
    pub fn from_row_slice(n: usize, values: &[f64]) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: values.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(n, n, values))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Largest `|A_ij - A_ji|` seen at construction, before symmetrization.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[(i, j)] = value;
        self.data[(j, i)] = value;
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        self.data.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.amax()
    }

    /// Frobenius inner product `<A, B>`.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        self.data.dot(&other.data)
    }

    /// `v^T A v`.
    pub fn quad_form(&self, v: &DVector<f64>) -> f64 {
        (&self.data * v).dot(v)
    }

    pub fn mul_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.data * v
    }

    /// `self += alpha * v v^T`.
    pub fn add_outer(&mut self, alpha: f64, v: &DVector<f64>) {
        self.data.ger(alpha, v, v, 1.0);
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        Self {
            data: &self.data * s,
            asymmetry: 0.0,
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        Self {
            data: &self.data + &other.data,
            asymmetry: 0.0,
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        Self {
            data: &self.data - &other.data,
            asymmetry: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub(crate) fn from_dmatrix_unchecked(data: DMatrix<f64>) -> Self {
        let data = (&data + data.transpose()) * 0.5;
        Self {
            data,
            asymmetry: 0.0,
        }
    }
}

/// Eigenvalues sorted descending, paired with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector of `values[i]`.
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().expect("non-empty decomposition")
    }

    pub fn max_value(&self) -> f64 {
        self.values[0]
    }

    /// `sum_i f(lambda_i) v_i v_i^T`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.vectors.nrows();
        let scaled = DMatrix::from_fn(n, self.len(), |r, c| self.vectors[(r, c)] * f(self.values[c]));
        SymMatrix::from_dmatrix_unchecked(&scaled * self.vectors.transpose())
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Full symmetric eigendecomposition, eigenvalues descending.
///
/// Eigenvectors are sign-normalized so their largest-magnitude entry is
/// positive (first such index on ties).
pub fn eig_decompose(a: &SymMatrix) -> Result<EigenDecomposition> {
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let n = a.dim();
    let eig = SymmetricEigen::try_new(a.as_dmatrix().clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        canonicalize_sign(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Flips `v` so that its largest-magnitude entry is positive.
pub fn canonicalize_sign(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < 0.0 {
        v.neg_mut();
    }
}

/// A violated PSD cut: the most negative eigenvalue and its unit eigenvector.
#[derive(Clone, Debug)]
pub struct NegativeDirection {
    pub value: f64,
    pub vector: DVector<f64>,
}

/// PSD separation oracle.
///
/// Returns `None` when `lambda_min(X) >= -tol`; otherwise the smallest
/// eigenvalue and its unit eigenvector, for which `v^T X v < -tol`.
pub fn min_eig_cut(x: &SymMatrix, tol: f64) -> Result<Option<NegativeDirection>> {
    let eig = eig_decompose(x)?;
    let value = eig.min_value();
    if value >= -tol {
        return Ok(None);
    }
    Ok(Some(NegativeDirection {
        value,
        vector: eig.vector(eig.len() - 1),
    }))
}

/// All eigenpairs with eigenvalue below `-tol`, most negative first.
pub fn negative_directions(x: &SymMatrix, tol: f64) -> Result<Vec<NegativeDirection>> {
    let eig = eig_decompose(x)?;
    Ok((0..eig.len())
        .rev()
        .filter(|&i| eig.values[i] < -tol)
        .map(|i| NegativeDirection {
            value: eig.values[i],
            vector: eig.vector(i),
        })
        .collect())
}

/// Factor `B` (`n x n`) with `B^T B = P(Y)`, where `P` clips negative eigenvalues to zero.
///
/// Column `i` of `B` is the vector embedding of index `i`.
pub fn psd_factor(y: &SymMatrix) -> Result<DMatrix<f64>> {
    let eig = eig_decompose(y)?;
    let n = y.dim();
    Ok(DMatrix::from_fn(n, n, |r, c| {
        eig.values[r].max(0.0).sqrt() * eig.vectors[(c, r)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn k2() -> SymMatrix {
        SymMatrix::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn petersen() -> SymMatrix {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        let mut a = SymMatrix::zeros(10);
        for (u, v) in edges {
            a.set(u, v, 1.0);
        }
        a
    }

    /// Characteristic polynomial by Faddeev-LeVerrier in exact integer arithmetic.
    fn char_poly(a: &SymMatrix) -> Vec<i128> {
        let n = a.dim();
        let am: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| a.get(i, j).round() as i128).collect())
            .collect();
        let mul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect())
                .collect()
        };
        let mut coeffs = vec![1i128];
        let mut m: Vec<Vec<i128>> = vec![vec![0; n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
            let mut mk = mul(&am, &m);
            let c_prev = *coeffs.last().unwrap();
            for (i, row) in mk.iter_mut().enumerate() {
                row[i] += c_prev;
            }
            let am_k = mul(&am, &mk);
            let tr: i128 = (0..n).map(|i| am_k[i][i]).sum();
            assert_eq!(tr % (k as i128), 0);
            coeffs.push(-tr / k as i128);
            m = mk;
        }
        coeffs
    }

    fn eval_poly(coeffs: &[i128], x: i128) -> i128 {
        coeffs.iter().fold(0, |acc, &c| acc * x + c)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = eig_decompose(&SymMatrix::identity(3)).unwrap();
        for v in &eig.values {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
        }
        let gram = eig.vectors.transpose() * &eig.vectors;
        assert!((gram - DMatrix::<f64>::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn k2_closed_form() {
        let eig = eig_decompose(&k2()).unwrap();
        assert_abs_diff_eq!(eig.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.values[1], -1.0, epsilon = 1e-12);
        let s = 1.0 / 2f64.sqrt();
        let v0 = eig.vector(0);
        let v1 = eig.vector(1);
        assert_abs_diff_eq!(v0[0].abs(), s, epsilon = 1e-12);
        assert_abs_diff_eq!(v0[0], v0[1], epsilon = 1e-12);
        assert_abs_diff_eq!(v1[0], -v1[1], epsilon = 1e-12);
    }

    #[test]
    fn petersen_spectrum_matches_characteristic_polynomial() {
        let a = petersen();
        let poly = char_poly(&a);
        // 3, 1 and -2 are the only integer roots, with multiplicities 1, 5, 4.
        for root in [3i128, 1, -2] {
            assert_eq!(eval_poly(&poly, root), 0, "root {root}");
        }
        let eig = eig_decompose(&a).unwrap();
        let expected = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
        for i in 0..10 {
            let v = eig.vector(i);
            let resid = (a.mul_vec(&v) - &v * eig.values[i]).norm();
            assert!(resid <= 1e-8 * a.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn min_eig_cut_examples() {
        assert!(min_eig_cut(&SymMatrix::identity(2), 1e-9).unwrap().is_none());

        let d = SymMatrix::from_diagonal(&[1.0, -0.5]);
        let cut = min_eig_cut(&d, 1e-9).unwrap().unwrap();
        assert_abs_diff_eq!(cut.value, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(cut.vector[1].abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cut.vector[0], 0.0, epsilon = 1e-12);

        let cut = min_eig_cut(&k2(), 1e-9).unwrap().unwrap();
        assert_abs_diff_eq!(cut.value, -1.0, epsilon = 1e-12);
        let s = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(cut.vector[0].abs(), s, epsilon = 1e-12);
        assert_abs_diff_eq!(cut.vector[0], -cut.vector[1], epsilon = 1e-12);
        assert_abs_diff_eq!(k2().quad_form(&cut.vector), cut.value, epsilon = 1e-8);
    }

    #[test]
    fn rejects_non_finite_and_asymmetric_input() {
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(matches!(SymMatrix::from_dmatrix(bad), Err(Error::InvalidMatrix(_))));
        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(SymMatrix::from_dmatrix(skew), Err(Error::InvalidMatrix(_))));
        let tiny = DMatrix::from_row_slice(2, 2, &[1.0, 0.5 + 1e-9, 0.5, 1.0]);
        let m = SymMatrix::from_dmatrix(tiny).unwrap();
        assert!(m.asymmetry() > 0.0);
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn psd_factor_reproduces_psd_matrix() {
        let y = SymMatrix::from_row_slice(2, &[1.0, -1.0, -1.0, 1.0]).unwrap();
        let b = psd_factor(&y).unwrap();
        let back = b.transpose() * &b;
        assert!((back - y.as_dmatrix()).amax() < 1e-12);
    }

    #[test]
    fn output_is_deterministic() {
        let a = petersen();
        let e1 = eig_decompose(&a).unwrap();
        let e2 = eig_decompose(&a).unwrap();
        assert_eq!(e1.values, e2.values);
        assert_eq!(e1.vectors, e2.vectors);
    }
}

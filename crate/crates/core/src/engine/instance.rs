use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Optimization direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Right-hand side of a linear row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Eq(f64),
    Le(f64),
    Ge(f64),
    /// `lo <= a.x <= hi`
    Range(f64, f64),
}

impl Bound {
    /// Amount by which `activity` violates the bound (0 when satisfied).
    pub fn violation(&self, activity: f64) -> f64 {
        match *self {
            Bound::Eq(b) => (activity - b).abs(),
            Bound::Le(b) => (activity - b).max(0.0),
            Bound::Ge(b) => (b - activity).max(0.0),
            Bound::Range(lo, hi) => (lo - activity).max(activity - hi).max(0.0),
        }
    }
}

/// Coefficient on entry `(i, j)` of X, with `i <= j`. An off-diagonal term
/// multiplies the single variable `X_ij`, so `<A, X>` contributes `2 A_ij` there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntryTerm {
    pub i: usize,
    pub j: usize,
    pub coef: f64,
}

impl EntryTerm {
    pub fn new(i: usize, j: usize, coef: f64) -> Self {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        Self { i, j, coef }
    }
}

/// A linear expression over the entries of X and the auxiliary variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearExpr {
    pub entries: Vec<EntryTerm>,
    /// `(aux index, coefficient)`
    pub aux: Vec<(usize, f64)>,
}

impl LinearExpr {
    pub fn entry(mut self, i: usize, j: usize, coef: f64) -> Self {
        self.entries.push(EntryTerm::new(i, j, coef));
        self
    }

    pub fn aux(mut self, k: usize, coef: f64) -> Self {
        self.aux.push((k, coef));
        self
    }

    /// `<A, X>` written over the entry variables.
    pub fn from_matrix(a: &SymMatrix) -> Self {
        let n = a.dim();
        let mut e = Self::default();
        for i in 0..n {
            for j in i..n {
                let v = a.get(i, j);
                if v != 0.0 {
                    e.entries.push(EntryTerm::new(i, j, if i == j { v } else { 2.0 * v }));
                }
            }
        }
        e
    }

    /// `v^T X v` written over the entry variables.
    pub fn quadratic_form(v: &[f64]) -> Self {
        let mut e = Self::default();
        for i in 0..v.len() {
            if v[i] == 0.0 {
                continue;
            }
            e.entries.push(EntryTerm::new(i, i, v[i] * v[i]));
            for j in i + 1..v.len() {
                if v[j] != 0.0 {
                    e.entries.push(EntryTerm::new(i, j, 2.0 * v[i] * v[j]));
                }
            }
        }
        e
    }

    pub fn evaluate(&self, x: &SymMatrix, aux: &[f64]) -> f64 {
        let a: f64 = self.entries.iter().map(|t| t.coef * x.get(t.i, t.j)).sum();
        let b: f64 = self.aux.iter().map(|&(k, c)| c * aux[k]).sum();
        a + b
    }
}

/// A tagged linear constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub tag: String,
    pub expr: LinearExpr,
    pub bound: Bound,
    /// Row used only by linear relaxations; the exact SDP leaves it out. Box rows
    /// and other consequences of PSD-ness are flagged this way.
    pub relaxation_only: bool,
}

impl LinearRow {
    pub fn new(tag: impl Into<String>, expr: LinearExpr, bound: Bound) -> Self {
        Self {
            tag: tag.into(),
            expr,
            bound,
            relaxation_only: false,
        }
    }

    pub fn relaxation_only(mut self) -> Self {
        self.relaxation_only = true;
        self
    }
}

/// `|| (c_1.x, ..., c_k.x) ||_2 <= t.x` over entries of X. Used by relaxations only.
#[derive(Clone, Debug, PartialEq)]
pub struct SocRow {
    pub tag: String,
    pub bound: LinearExpr,
    pub components: Vec<LinearExpr>,
}

/// An SDP `opt <C, X> + c^T x` over symmetric `X >= 0` and nonnegative auxiliaries `x`.
#[derive(Clone, Debug)]
pub struct SdpInstance {
    pub objective: SymMatrix,
    pub sense: Sense,
    /// `<A_i, X> (=, <=, >=) b_i`
    pub constraints: Vec<LinearRow>,
    pub extra_linear: Vec<LinearRow>,
    pub extra_socp: Vec<SocRow>,
    /// Names of the nonnegative auxiliary variables.
    pub aux_names: Vec<String>,
    /// Objective coefficients on the auxiliary variables.
    pub aux_objective: Vec<f64>,
}

impl SdpInstance {
    pub fn new(objective: SymMatrix, sense: Sense) -> Self {
        Self {
            objective,
            sense,
            constraints: Vec::new(),
            extra_linear: Vec::new(),
            extra_socp: Vec::new(),
            aux_names: Vec::new(),
            aux_objective: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// Adds `<a, X> bound` as a matrix constraint.
    pub fn add_constraint(&mut self, tag: impl Into<String>, a: &SymMatrix, bound: Bound) -> Result<()> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        self.constraints.push(LinearRow::new(tag, LinearExpr::from_matrix(a), bound));
        Ok(())
    }

    pub fn add_aux(&mut self, name: impl Into<String>, objective: f64) -> usize {
        self.aux_names.push(name.into());
        self.aux_objective.push(objective);
        self.aux_names.len() - 1
    }

    /// Entry-wise `-1 <= X_ij <= 1` rows tagged `box:(i,j)`.
    pub fn add_box_rows(&mut self, include_diagonal: bool) {
        let n = self.dim();
        for i in 0..n {
            let start = if include_diagonal { i } else { i + 1 };
            for j in start..n {
                self.extra_linear.push(
                    LinearRow::new(
                        format!("box:({},{})", i + 1, j + 1),
                        LinearExpr::default().entry(i, j, 1.0),
                        Bound::Range(-1.0, 1.0),
                    )
                    .relaxation_only(),
                );
            }
        }
    }

    /// Checks that every row refers to valid entries and auxiliaries.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.aux_objective.len() != self.aux_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.aux_names.len(),
                found: self.aux_objective.len(),
            });
        }
        let check = |e: &LinearExpr| -> Result<()> {
            for t in &e.entries {
                if t.j >= n {
                    return Err(Error::DimensionMismatch { expected: n, found: t.j + 1 });
                }
                if !t.coef.is_finite() {
                    return Err(Error::InvalidParameter("non-finite coefficient".into()));
                }
            }
            for &(k, c) in &e.aux {
                if k >= self.aux_names.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.aux_names.len(),
                        found: k + 1,
                    });
                }
                if !c.is_finite() {
                    return Err(Error::InvalidParameter("non-finite coefficient".into()));
                }
            }
            Ok(())
        };
        for row in self.constraints.iter().chain(&self.extra_linear) {
            check(&row.expr)?;
        }
        for cone in &self.extra_socp {
            check(&cone.bound)?;
            for c in &cone.components {
                check(c)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_form_doubles_off_diagonal() {
        let s = 1.0 / 2f64.sqrt();
        let e = LinearExpr::quadratic_form(&[s, s]);
        let coefs: Vec<_> = e.entries.iter().map(|t| (t.i, t.j, t.coef)).collect();
        assert_eq!(coefs.len(), 3);
        assert!((coefs[0].2 - 0.5).abs() < 1e-15);
        assert_eq!((coefs[1].0, coefs[1].1), (0, 1));
        assert!((coefs[1].2 - 1.0).abs() < 1e-15);
        assert!((coefs[2].2 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matrix_expression_matches_inner_product() {
        let a = SymMatrix::from_row_slice(3, &[1.0, 2.0, 0.0, 2.0, -1.0, 3.0, 0.0, 3.0, 4.0]).unwrap();
        let x = SymMatrix::from_row_slice(3, &[2.0, 0.5, 1.0, 0.5, 1.0, -2.0, 1.0, -2.0, 3.0]).unwrap();
        let e = LinearExpr::from_matrix(&a);
        assert!((e.evaluate(&x, &[]) - a.inner(&x)).abs() < 1e-12);
    }

    #[test]
    fn bound_violation() {
        assert_eq!(Bound::Le(1.0).violation(0.5), 0.0);
        assert_eq!(Bound::Ge(1.0).violation(0.5), 0.5);
        assert_eq!(Bound::Range(-1.0, 1.0).violation(1.5), 0.5);
        assert_eq!(Bound::Eq(2.0).violation(1.0), 1.0);
    }
}

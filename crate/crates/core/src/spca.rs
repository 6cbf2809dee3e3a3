//! Sparse PCA: the linear relaxation of the DSPCA program, deflation and
//! explained variance.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::engine::{
    build_ls, cutting_plane, reference_sdp, solve, Bound, CutSet, CuttingPlaneOptions, LinearExpr, LinearRow,
    RelaxationModel, ReferenceOptions, SdpInstance, Sense, SolveReport, SolverOptions,
};
use crate::error::{Error, Result};
use crate::gen::rng_from_seed;
use crate::linalg::{canonicalize_sign, eig_decompose, SymMatrix};

/// Relative tolerance for the PSD check on covariance input.
pub const COV_PSD_TOL: f64 = 1e-8;

/// A covariance or correlation matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CovMatrix {
    c: SymMatrix,
}

impl CovMatrix {
    /// Accepts `c` when `lambda_min(c) >= -1e-8 ||c||_F`.
    pub fn new(c: SymMatrix) -> Result<Self> {
        let lam = eig_decompose(&c)?.min_value();
        if lam < -COV_PSD_TOL * c.frobenius_norm().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidMatrix(format!(
                "covariance matrix is not PSD (lambda_min = {lam:e})"
            )));
        }
        Ok(Self { c })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }
}

/// A unit-norm sparse loading vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseComponent {
    pub loading: Vec<f64>,
    /// Indices of the nonzero loadings, ascending (0-based).
    pub support: Vec<usize>,
    /// `x^T C x` for the covariance the component was extracted from.
    pub objective: f64,
    /// Optimal value of the relaxation that produced the component.
    pub relaxation_value: f64,
}

/// Largest admissible pairwise coefficient.
pub const ALPHA_MAX: f64 = std::f64::consts::SQRT_2;

/// The sparse-PCA SDP `max <C, X>` s.t. `Tr X = 1`, `1^T |X| 1 <= k`, with the
/// linear side rows of the relaxation flagged as relaxation-only.
///
/// `|X_ij|` for `i < j` is modelled by an auxiliary `T_ij >= +-X_ij`; the
/// diagonal enters the budget as `X_ii`, which is nonnegative in both models.
pub fn spca_instance(c: &CovMatrix, k: usize, alpha: f64) -> Result<SdpInstance> {
    let p = c.dim();
    if k == 0 || k > p {
        return Err(Error::InvalidParameter(format!("sparsity target k = {k} must lie in 1..={p}")));
    }
    if !(0.0..=ALPHA_MAX).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in [0, sqrt 2]")));
    }
    let mut inst = SdpInstance::new(c.matrix().clone(), Sense::Maximize);
    let mut trace = LinearExpr::default();
    for i in 0..p {
        trace = trace.entry(i, i, 1.0);
    }
    inst.constraints.push(LinearRow::new("trace", trace.clone(), Bound::Eq(1.0)));
    let mut budget = trace;
    for i in 0..p {
        for j in i + 1..p {
            let t = inst.add_aux(format!("t:({},{})", i + 1, j + 1), 0.0);
            budget = budget.aux(t, 2.0);
            inst.extra_linear.push(LinearRow::new(
                format!("abs+:({},{})", i + 1, j + 1),
                LinearExpr::default().aux(t, 1.0).entry(i, j, -1.0),
                Bound::Ge(0.0),
            ));
            inst.extra_linear.push(LinearRow::new(
                format!("abs-:({},{})", i + 1, j + 1),
                LinearExpr::default().aux(t, 1.0).entry(i, j, 1.0),
                Bound::Ge(0.0),
            ));
        }
    }
    inst.extra_linear.push(LinearRow::new("l1", budget, Bound::Le(k as f64)));
    for i in 0..p {
        inst.extra_linear.push(
            LinearRow::new(
                format!("diag-nonneg:{}", i + 1),
                LinearExpr::default().entry(i, i, 1.0),
                Bound::Ge(0.0),
            )
            .relaxation_only(),
        );
    }
    for i in 0..p {
        for j in i + 1..p {
            for (sign, name) in [(1.0, "pair+"), (-1.0, "pair-")] {
                inst.extra_linear.push(
                    LinearRow::new(
                        format!("{name}:({},{})", i + 1, j + 1),
                        LinearExpr::default()
                            .entry(i, i, 1.0)
                            .entry(j, j, 1.0)
                            .entry(i, j, 2.0 * sign * alpha),
                        Bound::Ge(0.0),
                    )
                    .relaxation_only(),
                );
            }
        }
    }
    inst.add_box_rows(true);
    Ok(inst)
}

/// The linear relaxation with cut set `s`.
pub fn build_lspca(c: &CovMatrix, k: usize, s: &CutSet, alpha: f64) -> Result<RelaxationModel> {
    build_ls(&spca_instance(c, k, alpha)?, s)
}

/// Top eigenvector of the relaxation optimum, truncated to its `k` largest
/// magnitudes and renormalized.
pub fn extract_component(report: &SolveReport, c: &CovMatrix, k: usize) -> Result<SparseComponent> {
    let x = report
        .primal_x
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("report carries no primal matrix".into()))?;
    if x.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: x.dim(),
        });
    }
    let top = eig_decompose(x)?.vector(0);
    let mut comp = truncate(&top, k)?;
    comp.objective = c.matrix().quad_form(&DVector::from_column_slice(&comp.loading));
    comp.relaxation_value = report.objective;
    Ok(comp)
}

/// Keeps the `k` largest-magnitude entries of `v` (ties broken by index).
pub fn truncate(v: &DVector<f64>, k: usize) -> Result<SparseComponent> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
    let mut out = DVector::zeros(v.len());
    for &i in order.iter().take(k) {
        out[i] = v[i];
    }
    let norm = out.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateComponent);
    }
    out /= norm;
    canonicalize_sign(&mut out);
    let support = (0..out.len()).filter(|&i| out[i] != 0.0).collect();
    Ok(SparseComponent {
        loading: out.iter().copied().collect(),
        support,
        objective: f64::NAN,
        relaxation_value: f64::NAN,
    })
}

/// `C - (x^T C x) x x^T`. The result may be indefinite, so no PSD check is made.
pub fn deflate(c: &CovMatrix, comp: &SparseComponent) -> Result<CovMatrix> {
    if comp.loading.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: comp.loading.len(),
        });
    }
    let x = DVector::from_column_slice(&comp.loading);
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!("loading has norm {norm}, expected 1")));
    }
    let q = c.matrix().quad_form(&x);
    let mut out = c.matrix().clone();
    out.add_outer(-q, &x);
    Ok(CovMatrix { c: out })
}

/// How cut sets are chosen in each round of [`sparse_pca`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutPolicy {
    /// The eigenbasis of the current covariance.
    Eigen,
    /// Separation-oracle cuts only, starting from the empty set.
    Oracle,
    /// Oracle cuts on top of the eigenbasis.
    Hybrid,
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsePcaOptions {
    pub alpha: f64,
    pub policy: CutPolicy,
    /// Oracle cut budget per component for the oracle and hybrid policies.
    pub budget: usize,
    pub solver: SolverOptions,
}

impl Default for SparsePcaOptions {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            policy: CutPolicy::Eigen,
            budget: 100,
            solver: SolverOptions::default(),
        }
    }
}

/// Extracts one component per entry of `ks`, deflating in between.
pub fn sparse_pca(c: &CovMatrix, ks: &[usize], opts: &SparsePcaOptions) -> Result<Vec<SparseComponent>> {
    if ks.is_empty() {
        return Err(Error::InvalidParameter("at least one sparsity target is required".into()));
    }
    let mut current = c.clone();
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        let report = solve_lspca(&current, k, opts)?;
        let mut comp = extract_component(&report, &current, k)?;
        comp.objective = c.matrix().quad_form(&DVector::from_column_slice(&comp.loading));
        current = deflate(&current, &comp)?;
        out.push(comp);
    }
    Ok(out)
}

/// Solves the relaxation for one component under the configured cut policy.
pub fn solve_lspca(c: &CovMatrix, k: usize, opts: &SparsePcaOptions) -> Result<SolveReport> {
    let inst = spca_instance(c, k, opts.alpha)?;
    let report = match opts.policy {
        CutPolicy::Eigen => solve(&build_ls(&inst, &CutSet::eigenbasis(c.matrix())?)?, &opts.solver)?,
        CutPolicy::Oracle | CutPolicy::Hybrid => {
            let s0 = if opts.policy == CutPolicy::Hybrid {
                CutSet::eigenbasis(c.matrix())?
            } else {
                CutSet::new()
            };
            let cp = CuttingPlaneOptions {
                budget: opts.budget,
                batch: 1,
                psd_tol: crate::engine::PSD_TOL,
                solver: opts.solver.clone(),
            };
            let mut out = cutting_plane(&inst, &s0, &cp)?;
            // an exhausted budget still leaves a valid relaxation optimum
            if out.report.status == crate::engine::SolveStatus::IterationLimit {
                out.report.status = crate::engine::SolveStatus::Optimal;
            }
            out.report
        }
    };
    report.require_optimal()?;
    Ok(report)
}

/// Exact SDP value of the sparse-PCA program.
pub fn spca_reference(c: &CovMatrix, k: usize, opts: &ReferenceOptions) -> Result<SolveReport> {
    let report = reference_sdp(&spca_instance(c, k, 1.0)?, opts)?;
    report.require_optimal()?;
    Ok(report)
}

/// Adjusted explained variance: with loadings `P`, the squared diagonal of the
/// Cholesky factor of `P^T C P` (the residual variance each loading adds after
/// the earlier ones), summed and divided by `Tr C`. Loadings that are linearly
/// dependent on earlier ones contribute nothing.
pub fn explained_variance(c: &CovMatrix, loadings: &[Vec<f64>]) -> Result<f64> {
    if loadings.is_empty() {
        return Err(Error::InvalidParameter("at least one component is required".into()));
    }
    let p = c.dim();
    let total = c.matrix().trace();
    if !(total > 0.0) {
        return Err(Error::InvalidMatrix("covariance has zero total variance".into()));
    }
    let r = loadings.len();
    let mut pm = DMatrix::zeros(p, r);
    for (j, l) in loadings.iter().enumerate() {
        if l.len() != p {
            return Err(Error::DimensionMismatch { expected: p, found: l.len() });
        }
        pm.set_column(j, &DVector::from_column_slice(l));
    }
    let g = pm.transpose() * c.matrix().as_dmatrix() * &pm;
    let scale = (0..r).map(|j| g[(j, j)].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut rf = DMatrix::zeros(r, r);
    let mut kept: Vec<usize> = Vec::new();
    let mut explained = 0.0;
    for j in 0..r {
        for (t, &i) in kept.iter().enumerate() {
            let s: f64 = kept[..t].iter().map(|&l| rf[(l, i)] * rf[(l, j)]).sum();
            rf[(i, j)] = (g[(i, j)] - s) / rf[(i, i)];
        }
        let resid = g[(j, j)] - kept.iter().map(|&i| rf[(i, j)] * rf[(i, j)]).sum::<f64>();
        if resid > 1e-10 * scale {
            rf[(j, j)] = resid.sqrt();
            kept.push(j);
            explained += resid;
        }
    }
    Ok(explained / total)
}

/// Hidden-factor model of the synthetic example: ten observed variables,
/// `X_1..X_4 = V_1 + e`, `X_5..X_8 = V_2 + e`, `X_9, X_10 = V_3 + e` with unit
/// observation noise, and `V_3 = -0.3 V_1 + 0.925 V_2 + eps`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SyntheticModel {
    pub var_v1: f64,
    pub var_v2: f64,
    /// Variance of `eps` in `V_3`.
    pub var_eps: f64,
}

impl Default for SyntheticModel {
    fn default() -> Self {
        Self {
            var_v1: 290.0,
            var_v2: 300.0,
            var_eps: 1.0,
        }
    }
}

const SYNTHETIC_GROUPS: [usize; 10] = [0, 0, 0, 0, 1, 1, 1, 1, 2, 2];

impl SyntheticModel {
    fn factor_cov(&self) -> [[f64; 3]; 3] {
        let (a, b) = (-0.3, 0.925);
        let c13 = a * self.var_v1;
        let c23 = b * self.var_v2;
        let v3 = a * a * self.var_v1 + b * b * self.var_v2 + self.var_eps;
        [[self.var_v1, 0.0, c13], [0.0, self.var_v2, c23], [c13, c23, v3]]
    }

    /// Exact covariance of the ten observed variables.
    pub fn covariance(&self) -> Result<CovMatrix> {
        let f = self.factor_cov();
        let c = SymMatrix::from_upper_fn(10, |i, j| {
            f[SYNTHETIC_GROUPS[i]][SYNTHETIC_GROUPS[j]] + if i == j { 1.0 } else { 0.0 }
        });
        CovMatrix::new(c)
    }

    /// `samples` draws from the model, one row per observation.
    pub fn sample(&self, samples: usize, seed: u64) -> Result<DMatrix<f64>> {
        if samples < 2 {
            return Err(Error::InvalidParameter("at least two samples are required".into()));
        }
        let normal = |v: f64| Normal::new(0.0, v.sqrt()).map_err(|e| Error::InvalidParameter(e.to_string()));
        let (n1, n2, ne, unit) = (normal(self.var_v1)?, normal(self.var_v2)?, normal(self.var_eps)?, normal(1.0)?);
        let mut rng = rng_from_seed(seed);
        let mut data = DMatrix::zeros(samples, 10);
        for s in 0..samples {
            let v1 = n1.sample(&mut rng);
            let v2 = n2.sample(&mut rng);
            let v = [v1, v2, -0.3 * v1 + 0.925 * v2 + ne.sample(&mut rng)];
            for (i, &grp) in SYNTHETIC_GROUPS.iter().enumerate() {
                data[(s, i)] = v[grp] + unit.sample(&mut rng);
            }
        }
        Ok(data)
    }

    /// Sample covariance of `samples` draws.
    pub fn sample_covariance(&self, samples: usize, seed: u64) -> Result<CovMatrix> {
        sample_covariance(&self.sample(samples, seed)?)
    }
}

/// Unbiased sample covariance of the columns of `data`.
pub fn sample_covariance(data: &DMatrix<f64>) -> Result<CovMatrix> {
    let n = data.nrows();
    if n < 2 || data.ncols() == 0 {
        return Err(Error::InvalidParameter("need at least two rows and one column".into()));
    }
    let mean = data.row_mean();
    let mut centered = data.clone();
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }
    let c = centered.transpose() * &centered / (n as f64 - 1.0);
    CovMatrix::new(SymMatrix::from_dmatrix(c)?)
}

/// Variance of the entries of `A` in [`wishart`].
pub const WISHART_ENTRY_VAR: f64 = 20.0;

/// `C = A^T A` for a `p x p` matrix `A` with i.i.d. `N(0, 20)` entries.
pub fn wishart(p: usize, seed: u64) -> Result<CovMatrix> {
    if p == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let normal = Normal::new(0.0, WISHART_ENTRY_VAR.sqrt()).expect("finite parameters");
    let mut rng = rng_from_seed(seed);
    let a = DMatrix::from_fn(p, p, |_, _| normal.sample(&mut rng));
    CovMatrix::new(SymMatrix::from_dmatrix(a.transpose() * &a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Provenance, SolveStatus};

    fn cov(c: SymMatrix) -> CovMatrix {
        CovMatrix::new(c).unwrap()
    }

    fn solve_with(c: &CovMatrix, k: usize, s: &CutSet) -> SolveReport {
        let r = solve(&build_lspca(c, k, s, 1.0).unwrap(), &SolverOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        r
    }

    #[test]
    fn identity_with_no_cuts() {
        let r = solve_with(&cov(SymMatrix::identity(3)), 1, &CutSet::new());
        assert!((r.objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn diagonal_with_eigen_cuts() {
        let c = cov(SymMatrix::from_diagonal(&[3.0, 1.0]));
        let r = solve_with(&c, 1, &CutSet::eigenbasis(c.matrix()).unwrap());
        assert!((r.objective - 3.0).abs() < 1e-6);
        let x = r.primal_x.as_ref().unwrap();
        assert!((x.get(0, 0) - 1.0).abs() < 1e-6 && x.get(1, 1).abs() < 1e-6);
        let comp = extract_component(&r, &c, 1).unwrap();
        assert_eq!(comp.loading, vec![1.0, 0.0]);
        assert_eq!(comp.support, vec![0]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let c = cov(SymMatrix::identity(3));
        assert!(spca_instance(&c, 0, 1.0).is_err());
        assert!(spca_instance(&c, 4, 1.0).is_err());
        assert!(spca_instance(&c, 2, 1.5).is_err());
        assert!(CovMatrix::new(SymMatrix::from_diagonal(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn truncation_keeps_k_largest() {
        let comp = truncate(&DVector::from_vec(vec![0.1, -0.7, 0.5, 0.2]), 2).unwrap();
        assert_eq!(comp.support, vec![1, 2]);
        let n = (0.49f64 + 0.25).sqrt();
        assert!((comp.loading[1] - 0.7 / n).abs() < 1e-12);
        assert!((comp.loading[2] + 0.5 / n).abs() < 1e-12);
        assert!(matches!(truncate(&DVector::zeros(3), 1), Err(Error::DegenerateComponent)));
    }

    #[test]
    fn deflation_examples() {
        let e1 = truncate(&DVector::from_vec(vec![1.0, 0.0]), 1).unwrap();
        for c in [SymMatrix::identity(2), SymMatrix::from_diagonal(&[3.0, 1.0])] {
            let d = deflate(&cov(c), &e1).unwrap();
            assert_eq!(d.matrix(), &SymMatrix::from_diagonal(&[0.0, 1.0]));
        }
    }

    #[test]
    fn identity_components_are_distinct_singletons() {
        let comps = sparse_pca(&cov(SymMatrix::identity(4)), &[1, 1], &SparsePcaOptions::default()).unwrap();
        assert_eq!(comps[0].support.len(), 1);
        assert_eq!(comps[1].support.len(), 1);
        assert_ne!(comps[0].support, comps[1].support);
    }

    #[test]
    fn explained_variance_examples() {
        let c = cov(SymMatrix::from_row_slice(3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 1.0]).unwrap());
        let eig = eig_decompose(c.matrix()).unwrap();
        let basis: Vec<Vec<f64>> = (0..3).map(|i| eig.vector(i).iter().copied().collect()).collect();
        assert!((explained_variance(&c, &basis).unwrap() - 1.0).abs() < 1e-12);
        let top = explained_variance(&c, &basis[..1]).unwrap();
        assert!((top - eig.values[0] / c.matrix().trace()).abs() < 1e-12);
        let repeated = explained_variance(&c, &[basis[0].clone(), basis[0].clone()]).unwrap();
        assert!((repeated - top).abs() < 1e-12);
    }

    #[test]
    fn explained_variance_of_correlated_loadings() {
        // e1 then e2 on [[2,1],[1,2]]: 2 + (2 - 1/2) out of 4
        let c = cov(SymMatrix::from_row_slice(2, &[2.0, 1.0, 1.0, 2.0]).unwrap());
        let ev = explained_variance(&c, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((ev - 0.875).abs() < 1e-12);
        let ev = explained_variance(&c, &[vec![1.0, 0.0]]).unwrap();
        assert!((ev - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sqrt2_pairwise_rows_cut_off_psd_matrices() {
        // X = J/2 is PSD with trace one, yet X_11 + X_22 - 2 sqrt(2) X_12 < 0
        let x = SymMatrix::ones(2).scaled(0.5);
        let lhs = x.get(0, 0) + x.get(1, 1) - 2.0 * ALPHA_MAX * x.get(0, 1);
        assert!(lhs < -0.4);
        assert!(x.get(0, 0) + x.get(1, 1) - 2.0 * x.get(0, 1) >= 0.0);
    }

    #[test]
    fn synthetic_true_covariance_recovers_blocks() {
        let c = SyntheticModel::default().covariance().unwrap();
        let comps = sparse_pca(&c, &[4, 4], &SparsePcaOptions::default()).unwrap();
        assert_eq!(comps[0].support, vec![4, 5, 6, 7]);
        assert_eq!(comps[1].support, vec![0, 1, 2, 3]);
    }

    #[test]
    fn literal_noise_variance_shifts_the_first_component() {
        let m = SyntheticModel {
            var_eps: 300.0,
            ..Default::default()
        };
        let comps = sparse_pca(&m.covariance().unwrap(), &[4], &SparsePcaOptions::default()).unwrap();
        assert!(comps[0].support.contains(&8) && comps[0].support.contains(&9));
    }

    #[test]
    fn synthetic_model_moments() {
        let m = SyntheticModel::default();
        let c = m.covariance().unwrap();
        assert!((c.matrix().get(0, 0) - 291.0).abs() < 1e-12);
        assert!((c.matrix().get(0, 8) + 87.0).abs() < 1e-12);
        assert!((c.matrix().get(4, 9) - 277.5).abs() < 1e-12);
        assert!((c.matrix().get(8, 8) - (282.7875 + 1.0 + 1.0)).abs() < 1e-9);
        let s = m.sample_covariance(20_000, 4).unwrap();
        assert!((s.matrix().get(4, 5) - 300.0).abs() < 20.0);
    }

    #[test]
    fn oracle_policy_runs() {
        let c = cov(SymMatrix::from_row_slice(3, &[2.0, 0.9, 0.1, 0.9, 1.5, 0.0, 0.1, 0.0, 1.0]).unwrap());
        let opts = SparsePcaOptions {
            policy: CutPolicy::Oracle,
            budget: 30,
            ..Default::default()
        };
        let comps = sparse_pca(&c, &[2], &opts).unwrap();
        assert_eq!(comps[0].support, vec![0, 1]);
        let mut s = CutSet::new();
        s.insert(DVector::from_vec(vec![1.0, 0.0, 0.0]), Provenance::User).unwrap();
        assert!(build_lspca(&c, 2, &s, 1.0).unwrap().row("cut:v1").is_some());
    }
}

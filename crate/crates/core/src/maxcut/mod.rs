//! Max-cut frontend: the GW relaxation, its `SP_S` and `SD_S` linear models,
//! the eigenvalue bound, hyperplane rounding and simple baselines.
//!
//! Relaxation objectives are kept in raw form `z = <-W, X>`; the max-cut value
//! scale is `m/2 + z/4` (see [`gw_value`]).

mod baselines;
mod planted;
mod rounding;

pub use baselines::{brute_force_cut, cut_value, greedy_cut, sweep_cut, BRUTE_FORCE_MAX_N};
pub use planted::planted_instance;
pub use rounding::{gw_round, rounding_matrix, unit_diagonal};

use serde::Serialize;

use crate::engine::{
    build_ls, solve, Bound, CutSet, LinearExpr, RelaxationModel, SdpInstance, Sense, SolveReport, SolverOptions,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{eig_decompose, SymMatrix};

/// How a cut was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutMethod {
    GwRound,
    Greedy,
    Sweep,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutResult {
    pub side: Vec<i8>,
    pub value: f64,
    pub method: CutMethod,
}

/// Converts a raw relaxation objective `<-W, X>` to the max-cut scale.
pub fn gw_value(g: &Graph, raw: f64) -> f64 {
    g.m_total() / 2.0 + raw / 4.0
}

/// The GW SDP `max <-W, X>` s.t. `X_ii = 1`, with off-diagonal box rows for the relaxations.
pub fn gw_instance(g: &Graph) -> SdpInstance {
    let n = g.n();
    let mut inst = SdpInstance::new(g.adjacency().scaled(-1.0), Sense::Maximize);
    for i in 0..n {
        inst.constraints.push(crate::engine::LinearRow::new(
            format!("diag:{}", i + 1),
            LinearExpr::default().entry(i, i, 1.0),
            Bound::Eq(1.0),
        ));
    }
    inst.add_box_rows(false);
    inst
}

/// `SP_S`: unit diagonal, box, and a cut row per vector of `s`.
pub fn build_sp(g: &Graph, s: &CutSet) -> Result<RelaxationModel> {
    build_ls(&gw_instance(g), s)
}

/// `SD_S`: maximize `sum eta_k <-W, x_k x_k^T>` over `eta >= 0` with
/// `diag(sum eta_k x_k x_k^T) <= 1`.
pub fn build_sd(g: &Graph, s: &CutSet) -> Result<RelaxationModel> {
    if s.is_empty() {
        return Err(Error::EmptyCutSet);
    }
    let n = g.n();
    if s.dim() != Some(n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.dim().unwrap_or(0),
        });
    }
    let names = (0..s.len()).map(|k| format!("eta:{}", k + 1)).collect();
    let mut model = RelaxationModel::new(0, names, Sense::Maximize);
    let w = g.adjacency();
    let mut diag_rows = vec![Vec::new(); n];
    for (k, (x, _)) in s.iter().enumerate() {
        let var = model.aux_var(k);
        model.set_objective_coef(var, -w.quad_form(x));
        for i in 0..n {
            if x[i] != 0.0 {
                diag_rows[i].push((var, x[i] * x[i]));
            }
        }
    }
    for (i, coeffs) in diag_rows.into_iter().enumerate() {
        model.add_row(format!("diag:{}", i + 1), coeffs, Bound::Le(1.0))?;
    }
    for k in 0..s.len() {
        let var = model.aux_var(k);
        model.add_row(format!("nonneg:eta:{}", k + 1), vec![(var, 1.0)], Bound::Ge(0.0))?;
    }
    Ok(model)
}

/// `Y = sum eta_k x_k x_k^T`.
pub fn assemble_sd_matrix(s: &CutSet, eta: &[f64]) -> Result<SymMatrix> {
    let n = s.dim().ok_or(Error::EmptyCutSet)?;
    if eta.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            found: eta.len(),
        });
    }
    let mut y = SymMatrix::zeros(n);
    for ((x, _), &e) in s.iter().zip(eta) {
        y.add_outer(e.max(0.0), x);
    }
    Ok(y)
}

/// Solved `SP_S` with both objective scales.
#[derive(Clone, Debug)]
pub struct SpSolution {
    pub report: SolveReport,
    pub raw: f64,
    pub value: f64,
}

/// Solved `SD_S` with the assembled PSD matrix.
#[derive(Clone, Debug)]
pub struct SdSolution {
    pub report: SolveReport,
    pub raw: f64,
    pub value: f64,
    pub eta: Vec<f64>,
    pub y: SymMatrix,
}

pub fn solve_sp(g: &Graph, s: &CutSet, opts: &SolverOptions) -> Result<SpSolution> {
    let report = solve(&build_sp(g, s)?, opts)?;
    report.require_optimal()?;
    let raw = report.objective;
    Ok(SpSolution {
        value: gw_value(g, raw),
        raw,
        report,
    })
}

pub fn solve_sd(g: &Graph, s: &CutSet, opts: &SolverOptions) -> Result<SdSolution> {
    let report = solve(&build_sd(g, s)?, opts)?;
    report.require_optimal()?;
    let raw = report.objective;
    let eta = report.aux.clone();
    let y = assemble_sd_matrix(s, &eta)?;
    Ok(SdSolution {
        value: gw_value(g, raw),
        raw,
        eta,
        y,
        report,
    })
}

/// `m/2 - (n/4) lambda_n(W)`.
pub fn eigenvalue_bound(g: &Graph) -> Result<f64> {
    let lam_n = eig_decompose(&g.adjacency())?.min_value();
    Ok(g.m_total() / 2.0 - g.n() as f64 / 4.0 * lam_n)
}

/// `-n lambda_n(W)`, the eigenvalue bound on the raw scale.
pub fn eigenvalue_bound_raw(g: &Graph) -> Result<f64> {
    let lam_n = eig_decompose(&g.adjacency())?.min_value();
    Ok(-(g.n() as f64) * lam_n)
}

/// The eigenbasis of `W`, the default cut set for both max-cut models.
pub fn eigen_cuts(g: &Graph) -> Result<CutSet> {
    CutSet::eigenbasis(&g.adjacency())
}

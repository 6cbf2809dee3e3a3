use serde::Serialize;

use super::cutset::CutSet;
use super::cutting::{cutting_plane_with, CuttingPlaneOptions};
use super::instance::{SdpInstance, Sense};
use super::model::{build_ls, RelaxationModel};
use super::solver::{ClarabelBackend, LpBackend, SolveReport, SolverOptions, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// How the exact SDP value is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceMethod {
    /// Interior-point solve with X in the PSD cone.
    Conic,
    /// Cutting planes seeded with the objective's eigenbasis and the standard basis.
    CuttingPlane,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReferenceOptions {
    pub method: ReferenceMethod,
    pub psd_tol: f64,
    /// Oracle cut budget for the cutting-plane method; `None` means `50 n`.
    pub budget: Option<usize>,
    pub batch: usize,
    pub solver: SolverOptions,
}

impl Default for ReferenceOptions {
    fn default() -> Self {
        Self {
            method: ReferenceMethod::Conic,
            psd_tol: PSD_TOL,
            budget: None,
            batch: 1,
            solver: SolverOptions::default(),
        }
    }
}

/// The exact SDP as a conic model: essential rows only, X constrained PSD.
pub fn build_sdp_model(inst: &SdpInstance) -> Result<RelaxationModel> {
    let mut essential = inst.clone();
    essential.extra_linear.retain(|r| !r.relaxation_only);
    essential.extra_socp.clear();
    let mut model = build_ls(&essential, &CutSet::new())?;
    model.set_psd(true);
    Ok(model)
}

/// Solves the SDP itself, giving the value every relaxation is compared with.
pub fn reference_sdp(inst: &SdpInstance, opts: &ReferenceOptions) -> Result<SolveReport> {
    reference_sdp_with(&ClarabelBackend, inst, opts)
}

pub fn reference_sdp_with(backend: &dyn LpBackend, inst: &SdpInstance, opts: &ReferenceOptions) -> Result<SolveReport> {
    match opts.method {
        ReferenceMethod::Conic => {
            if !backend.supports_psd() {
                return Err(Error::ConeUnsupported(backend.name().to_string()));
            }
            let model = build_sdp_model(inst)?;
            backend.solve(&model, &opts.solver)
        }
        ReferenceMethod::CuttingPlane => {
            let n = inst.dim();
            let mut s0 = CutSet::eigenbasis(&inst.objective)?;
            s0.extend_from(&CutSet::standard_basis(n))?;
            let cp = CuttingPlaneOptions {
                budget: opts.budget.unwrap_or(50 * n),
                batch: opts.batch,
                psd_tol: opts.psd_tol,
                solver: opts.solver.clone(),
            };
            Ok(cutting_plane_with(backend, inst, &s0, &cp)?.report)
        }
    }
}

/// Dual slack `S*` assembled from the row duals of `reference`:
/// `sum w_i A_i - C` for maximization, `C - sum w_i A_i` for minimization.
pub fn dual_slack_from_duals(inst: &SdpInstance, reference: &SolveReport) -> Result<SymMatrix> {
    let n = inst.dim();
    let mut s = SymMatrix::zeros(n);
    for row in inst.constraints.iter().chain(&inst.extra_linear) {
        let Some(w) = reference.dual(&row.tag) else {
            continue;
        };
        for t in &row.expr.entries {
            let a = if t.i == t.j { t.coef } else { t.coef / 2.0 };
            s.set(t.i, t.j, s.get(t.i, t.j) + w * a);
        }
    }
    let s = s.sub(&inst.objective);
    Ok(match inst.sense {
        Sense::Maximize => s,
        Sense::Minimize => s.scaled(-1.0),
    })
}

/// Builds `L_S` with `S` the eigenbasis of the dual slack at the reference
/// optimum and returns `|value(L_S) - reference|`.
pub fn optimal_cutset_check(inst: &SdpInstance, reference: &SolveReport, solver: &SolverOptions) -> Result<f64> {
    reference.require_optimal()?;
    let slack = dual_slack_from_duals(inst, reference)?;
    let cuts = CutSet::eigenbasis(&slack)?;
    let model = build_ls(inst, &cuts)?;
    let report = ClarabelBackend.solve(&model, solver)?;
    report.require_optimal()?;
    Ok((report.objective - reference.objective).abs())
}

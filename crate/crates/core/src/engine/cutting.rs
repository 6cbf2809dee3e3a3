use serde::Serialize;

use super::cutset::{CutSet, Provenance};
use super::instance::SdpInstance;
use super::model::build_ls;
use super::solver::{ClarabelBackend, LpBackend, SolveReport, SolveStatus, SolverOptions, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::negative_directions;

#[derive(Clone, Debug, Serialize)]
pub struct CuttingPlaneOptions {
    /// Maximum number of oracle cuts added on top of the seed set.
    pub budget: usize,
    /// Oracle cuts added per round (the most negative eigenvectors first).
    pub batch: usize,
    pub psd_tol: f64,
    pub solver: SolverOptions,
}

impl Default for CuttingPlaneOptions {
    fn default() -> Self {
        Self {
            budget: 200,
            batch: 1,
            psd_tol: PSD_TOL,
            solver: SolverOptions::default(),
        }
    }
}

/// Objective after one solve of the loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    /// Size of the cut set at this solve.
    pub cuts: usize,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct CuttingPlaneOutcome {
    pub report: SolveReport,
    pub cuts: CutSet,
    pub trace: Vec<TracePoint>,
    /// True when the last primal matrix was PSD at tolerance.
    pub converged: bool,
}

/// Kelley-style loop: solve `L_S`, add the eigenvectors of the most negative
/// eigenvalues of the optimum as cuts, repeat until PSD or out of budget.
pub fn cutting_plane(inst: &SdpInstance, s0: &CutSet, opts: &CuttingPlaneOptions) -> Result<CuttingPlaneOutcome> {
    cutting_plane_with(&ClarabelBackend, inst, s0, opts)
}

pub fn cutting_plane_with(
    backend: &dyn LpBackend,
    inst: &SdpInstance,
    s0: &CutSet,
    opts: &CuttingPlaneOptions,
) -> Result<CuttingPlaneOutcome> {
    if opts.batch == 0 {
        return Err(Error::InvalidParameter("batch must be at least 1".into()));
    }
    let mut cuts = s0.clone();
    let mut trace = Vec::new();
    let mut added = 0;
    loop {
        let model = build_ls(inst, &cuts)?;
        let mut report = backend.solve(&model, &opts.solver)?;
        if !report.is_optimal() {
            return Ok(CuttingPlaneOutcome {
                report,
                cuts,
                trace,
                converged: false,
            });
        }
        trace.push(TracePoint {
            cuts: cuts.len(),
            objective: report.objective,
        });
        let x = report
            .primal_x
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("instance has no matrix variable".into()))?;
        let dirs = negative_directions(x, opts.psd_tol)?;
        if dirs.is_empty() {
            return Ok(CuttingPlaneOutcome {
                report,
                cuts,
                trace,
                converged: true,
            });
        }
        if added >= opts.budget {
            report.status = SolveStatus::IterationLimit;
            return Ok(CuttingPlaneOutcome {
                report,
                cuts,
                trace,
                converged: false,
            });
        }
        let take = opts.batch.min(opts.budget - added);
        let mut inserted = 0;
        for d in dirs.into_iter() {
            if inserted == take {
                break;
            }
            if cuts.insert(d.vector, Provenance::Oracle)? {
                inserted += 1;
            }
        }
        if inserted == 0 {
            // every violated direction is already a cut: the LP optimum is not accurate enough
            report.status = SolveStatus::NumericalFailure;
            return Ok(CuttingPlaneOutcome {
                report,
                cuts,
                trace,
                converged: false,
            });
        }
        added += inserted;
    }
}

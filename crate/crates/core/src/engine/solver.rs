use std::time::Instant;

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use serde::Serialize;

use super::instance::{Bound, Sense};
use super::model::{entry_index, RelaxationModel};
use crate::error::{Error, Result};
use crate::linalg::{eig_decompose, SymMatrix};

/// Feasibility tolerance used to accept a solve as optimal.
pub const FEAS_TOL: f64 = 1e-7;
/// Relative objective tolerance.
pub const OPT_TOL: f64 = 1e-7;
/// Eigenvalue tolerance at which a matrix counts as PSD.
pub const PSD_TOL: f64 = 1e-6;

/// Sparse factorization used inside the interior-point solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KktMethod {
    /// `Faer` for models with a PSD block, `Qdldl` otherwise.
    Auto,
    Qdldl,
    Faer,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverOptions {
    pub feas_tol: f64,
    /// Gap and residual tolerance passed to the interior-point solver.
    pub solver_tol: f64,
    pub max_iter: u32,
    pub time_limit: Option<f64>,
    pub kkt: KktMethod,
    pub verbose: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feas_tol: FEAS_TOL,
            solver_tol: 1e-9,
            max_iter: 300,
            time_limit: None,
            kkt: KktMethod::Auto,
            verbose: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NumericalFailure,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Objective in the model's own sense. NaN unless a point was returned.
    pub objective: f64,
    pub primal_x: Option<SymMatrix>,
    pub aux: Vec<f64>,
    /// `d objective / d rhs` for every linear row, keyed by tag.
    pub duals: Vec<(String, f64)>,
    /// Dual matrix of the PSD block when the model carries one.
    pub dual_slack: Option<SymMatrix>,
    pub iterations: u32,
    pub wall_time: f64,
    /// Largest row, cone or PSD violation at the returned point.
    pub max_violation: f64,
}

impl SolveReport {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn dual(&self, tag: &str) -> Option<f64> {
        self.duals.iter().find(|(t, _)| t == tag).map(|&(_, d)| d)
    }

    /// Fails unless the status is optimal.
    pub fn require_optimal(&self) -> Result<&Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::NumericalFailure(format!("solve ended with status {:?}", self.status)))
        }
    }
}

/// A linear/conic solver able to report row duals.
pub trait LpBackend {
    fn name(&self) -> &str;
    fn supports_cones(&self) -> bool;
    fn supports_psd(&self) -> bool;
    fn solve(&self, model: &RelaxationModel, opts: &SolverOptions) -> Result<SolveReport>;
}

/// Interior-point backend built on Clarabel.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClarabelBackend;

/// Wraps a backend and hides its cone support.
#[derive(Clone, Copy, Debug, Default)]
pub struct LinearOnly<B>(pub B);

impl<B: LpBackend> LpBackend for LinearOnly<B> {
    fn name(&self) -> &str {
        "linear-only"
    }
    fn supports_cones(&self) -> bool {
        false
    }
    fn supports_psd(&self) -> bool {
        false
    }
    fn solve(&self, model: &RelaxationModel, opts: &SolverOptions) -> Result<SolveReport> {
        if !model.cones().is_empty() || model.psd() {
            return Err(Error::ConeUnsupported(self.name().to_string()));
        }
        self.0.solve(model, opts)
    }
}

/// Solves with the default backend.
pub fn solve(model: &RelaxationModel, opts: &SolverOptions) -> Result<SolveReport> {
    ClarabelBackend.solve(model, opts)
}

// one model row maps to one or two solver rows; sign is -1 where the row was negated
struct RowMap {
    parts: Vec<(usize, f64)>,
}

impl LpBackend for ClarabelBackend {
    fn name(&self) -> &str {
        "clarabel"
    }

    fn supports_cones(&self) -> bool {
        true
    }

    fn supports_psd(&self) -> bool {
        true
    }

    fn solve(&self, model: &RelaxationModel, opts: &SolverOptions) -> Result<SolveReport> {
        let start = Instant::now();
        let nv = model.num_vars();
        let maximize = model.sense() == Sense::Maximize;
        // the interior point stops on relative gaps; a unit-size cost keeps the
        // absolute primal residuals small for badly scaled objectives
        let cost_scale = model.objective().iter().fold(0.0, |m: f64, c| m.max(c.abs()));
        let cost_scale = if cost_scale > 0.0 && cost_scale.is_finite() { cost_scale } else { 1.0 };
        let q: Vec<f64> = model
            .objective()
            .iter()
            .map(|&c| (if maximize { -c } else { c }) / cost_scale)
            .collect();

        let mut ii = Vec::new();
        let mut jj = Vec::new();
        let mut vv = Vec::new();
        let mut b = Vec::new();
        let mut maps: Vec<RowMap> = (0..model.rows().len()).map(|_| RowMap { parts: vec![] }).collect();
        let push = |coeffs: &[(usize, f64)], sign: f64, rhs: f64, ii: &mut Vec<usize>, jj: &mut Vec<usize>, vv: &mut Vec<f64>, b: &mut Vec<f64>| {
            let r = b.len();
            for &(v, a) in coeffs {
                ii.push(r);
                jj.push(v);
                vv.push(sign * a);
            }
            b.push(sign * rhs);
            r
        };

        let mut n_zero = 0;
        for (k, row) in model.rows().iter().enumerate() {
            if let Bound::Eq(rhs) = row.bound {
                let r = push(&row.coeffs, 1.0, rhs, &mut ii, &mut jj, &mut vv, &mut b);
                maps[k].parts.push((r, 1.0));
                n_zero += 1;
            }
        }
        let mut n_nonneg = 0;
        for (k, row) in model.rows().iter().enumerate() {
            let parts: Vec<(f64, f64)> = match row.bound {
                Bound::Eq(_) => continue,
                Bound::Le(hi) => vec![(1.0, hi)],
                Bound::Ge(lo) => vec![(-1.0, lo)],
                Bound::Range(lo, hi) => vec![(1.0, hi), (-1.0, lo)],
            };
            for (sign, rhs) in parts {
                if !rhs.is_finite() {
                    continue;
                }
                let r = push(&row.coeffs, sign, rhs, &mut ii, &mut jj, &mut vv, &mut b);
                maps[k].parts.push((r, sign));
                n_nonneg += 1;
            }
        }
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
        if n_zero > 0 {
            cones.push(SupportedConeT::ZeroConeT(n_zero));
        }
        if n_nonneg > 0 {
            cones.push(SupportedConeT::NonnegativeConeT(n_nonneg));
        }
        for cone in model.cones() {
            // s = -A x with s_0 = t.x and s_k = c_k.x
            push(&cone.bound, -1.0, 0.0, &mut ii, &mut jj, &mut vv, &mut b);
            for c in &cone.components {
                push(c, -1.0, 0.0, &mut ii, &mut jj, &mut vv, &mut b);
            }
            cones.push(SupportedConeT::SecondOrderConeT(1 + cone.components.len()));
        }
        let n = model.matrix_dim();
        let psd_start = b.len();
        if model.psd() {
            let s2 = std::f64::consts::SQRT_2;
            // svec order: column-major upper triangle, off-diagonals scaled by sqrt(2)
            for j in 0..n {
                for i in 0..=j {
                    ii.push(b.len());
                    jj.push(entry_index(n, i, j));
                    vv.push(if i == j { -1.0 } else { -s2 });
                    b.push(0.0);
                }
            }
            cones.push(SupportedConeT::PSDTriangleConeT(n));
        }

        let m = b.len();
        let a = CscMatrix::new_from_triplets(m, nv, ii, jj, vv);
        let p = CscMatrix::zeros((nv, nv));
        let mut builder = DefaultSettingsBuilder::default();
        builder
            .verbose(opts.verbose)
            .max_iter(opts.max_iter)
            .tol_gap_abs(opts.solver_tol)
            .tol_gap_rel(opts.solver_tol)
            .tol_feas(opts.solver_tol)
            .presolve_enable(false)
            .direct_solve_method(
                match (opts.kkt, model.psd()) {
                    (KktMethod::Qdldl, _) | (KktMethod::Auto, false) => "qdldl",
                    (KktMethod::Faer, _) | (KktMethod::Auto, true) => "faer",
                }
                .to_string(),
            );
        if let Some(t) = opts.time_limit {
            builder.time_limit(t);
        }
        let settings = builder
            .build()
            .map_err(|e| Error::NumericalFailure(format!("solver settings: {e}")))?;
        let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings)
            .map_err(|e| Error::NumericalFailure(format!("solver setup: {e}")))?;
        solver.solve();
        let sol = &solver.solution;

        let x = &sol.x;
        let primal_x = model.unpack_matrix(x);
        let aux = model.unpack_aux(x);
        let mut max_violation = model.max_violation(x);
        if model.psd() {
            if let Some(xm) = &primal_x {
                let lam = eig_decompose(xm)?.min_value();
                max_violation = max_violation.max(-lam);
            }
        }
        let objective = model.evaluate_objective(x);
        let flip = if maximize { cost_scale } else { -cost_scale };
        let duals = model
            .rows()
            .iter()
            .zip(&maps)
            .map(|(row, map)| {
                let d: f64 = map.parts.iter().map(|&(r, sign)| sign * flip * sol.z[r]).sum();
                (row.tag.clone(), d)
            })
            .collect();
        let dual_slack = if model.psd() && n > 0 {
            let z = &sol.z[psd_start..];
            let mut zm = SymMatrix::zeros(n);
            let mut k = 0;
            for j in 0..n {
                for i in 0..=j {
                    zm.set(i, j, cost_scale * (if i == j { z[k] } else { z[k] / std::f64::consts::SQRT_2 }));
                    k += 1;
                }
            }
            Some(zm)
        } else {
            None
        };

        let status = match sol.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => {
                if max_violation <= opts.feas_tol {
                    SolveStatus::Optimal
                } else {
                    SolveStatus::NumericalFailure
                }
            }
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => SolveStatus::Infeasible,
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => SolveStatus::Unbounded,
            SolverStatus::MaxIterations | SolverStatus::MaxTime => SolveStatus::IterationLimit,
            _ => SolveStatus::NumericalFailure,
        };
        let objective = match status {
            SolveStatus::Optimal | SolveStatus::IterationLimit | SolveStatus::NumericalFailure => objective,
            SolveStatus::Unbounded => flip * f64::INFINITY,
            SolveStatus::Infeasible => f64::NAN,
        };
        Ok(SolveReport {
            status,
            objective,
            primal_x,
            aux,
            duals,
            dual_slack,
            iterations: sol.iterations,
            wall_time: start.elapsed().as_secs_f64(),
            max_violation,
        })
    }
}

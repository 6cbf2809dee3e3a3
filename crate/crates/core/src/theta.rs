//! Lovász theta: `max <J - W, X>` over `Tr X = 1`, `X_ij = 0` on edges, `X >= 0`,
//! and its linear and second-order-cone relaxations.

use serde::Serialize;

use crate::engine::{
    build_ls, reference_sdp, solve, Bound, CutSet, LinearExpr, LinearRow, Provenance, RelaxationModel,
    ReferenceOptions, SdpInstance, Sense, SocRow, SolveReport, SolveStatus, SolverOptions, PSD_TOL,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{eig_decompose, negative_directions, SymMatrix};

#[derive(Clone, Debug)]
pub struct ThetaInstance {
    pub graph: Graph,
    /// `J - W` with `W` the 0/1 adjacency pattern of the graph.
    pub shifted_objective: SymMatrix,
}

impl ThetaInstance {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.n();
        let mut c = SymMatrix::ones(n);
        for e in graph.edges() {
            c.set(e.u, e.v, 0.0);
        }
        Self {
            graph: graph.clone(),
            shifted_objective: c,
        }
    }

    /// The SDP with the relaxation side rows (`X_ii >= 0`, `|X_ij| <= 1`) and,
    /// when `socp` is set, the 2x2-minor cones `||(2 X_ij, X_ii - X_jj)|| <= X_ii + X_jj`.
    pub fn sdp_instance(&self, socp: bool) -> SdpInstance {
        let n = self.graph.n();
        let mut inst = SdpInstance::new(self.shifted_objective.clone(), Sense::Maximize);
        let mut trace = LinearExpr::default();
        for i in 0..n {
            trace = trace.entry(i, i, 1.0);
        }
        inst.constraints.push(LinearRow::new("trace", trace, Bound::Eq(1.0)));
        for e in self.graph.edges() {
            inst.constraints.push(LinearRow::new(
                format!("edge:({},{})", e.u + 1, e.v + 1),
                LinearExpr::default().entry(e.u, e.v, 1.0),
                Bound::Eq(0.0),
            ));
        }
        for i in 0..n {
            inst.extra_linear.push(
                LinearRow::new(
                    format!("diag-nonneg:{}", i + 1),
                    LinearExpr::default().entry(i, i, 1.0),
                    Bound::Ge(0.0),
                )
                .relaxation_only(),
            );
        }
        inst.add_box_rows(true);
        if socp {
            for i in 0..n {
                for j in i + 1..n {
                    inst.extra_socp.push(SocRow {
                        tag: format!("minor:({},{})", i + 1, j + 1),
                        bound: LinearExpr::default().entry(i, i, 1.0).entry(j, j, 1.0),
                        components: vec![
                            LinearExpr::default().entry(i, j, 2.0),
                            LinearExpr::default().entry(i, i, 1.0).entry(j, j, -1.0),
                        ],
                    });
                }
            }
        }
        inst
    }
}

/// `LT_n` with cut set `s`.
pub fn build_ltn(inst: &ThetaInstance, s: &CutSet, socp: bool) -> Result<RelaxationModel> {
    build_ls(&inst.sdp_instance(socp), s)
}

/// Exact theta value of the graph.
pub fn theta_reference(g: &Graph, opts: &ReferenceOptions) -> Result<SolveReport> {
    let report = reference_sdp(&ThetaInstance::new(g).sdp_instance(false), opts)?;
    report.require_optimal()?;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaPolicy {
    /// Eigenvectors of `J - W` by ascending eigenvalue, then oracle cuts.
    Eigen,
    /// Oracle cuts only, starting from the empty set.
    Oracle,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaOptions {
    pub policy: ThetaPolicy,
    pub socp: bool,
    /// Total number of cuts.
    pub budget: usize,
    /// Eigenvectors added per solve, and the spacing of recorded points.
    pub batch: usize,
    /// Oracle cuts added per solve.
    pub oracle_batch: usize,
    /// Stop once the ratio reaches this value.
    pub target_ratio: Option<f64>,
    pub psd_tol: f64,
    pub solver: SolverOptions,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        Self {
            policy: ThetaPolicy::Eigen,
            socp: false,
            budget: 500,
            batch: 20,
            oracle_batch: 1,
            target_ratio: None,
            psd_tol: PSD_TOL,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaPoint {
    pub cuts: usize,
    pub objective: f64,
    /// `theta / objective`, at most one.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaTrace {
    pub reference: f64,
    pub points: Vec<ThetaPoint>,
    /// True when the last relaxation optimum was PSD at tolerance.
    pub converged: bool,
}

impl ThetaTrace {
    pub fn final_ratio(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.ratio)
    }
}

/// Grows the cut set up to `budget` cuts, solving `LT_n` after each addition
/// and recording `reference / objective` every `batch` cuts and at the end.
pub fn theta_experiment(g: &Graph, reference: f64, opts: &ThetaOptions) -> Result<ThetaTrace> {
    if opts.batch == 0 || opts.oracle_batch == 0 || opts.batch > opts.budget.max(1) {
        return Err(Error::InvalidParameter(format!(
            "need budget >= batch >= 1 and oracle_batch >= 1, got budget {}, batch {}, oracle_batch {}",
            opts.budget, opts.batch, opts.oracle_batch
        )));
    }
    if !(reference > 0.0) {
        return Err(Error::InvalidParameter(format!("reference value {reference} must be positive")));
    }
    let inst = ThetaInstance::new(g);
    let sdp = inst.sdp_instance(opts.socp);
    // popped from the back: ascending eigenvalue order
    let mut pending: Vec<nalgebra::DVector<f64>> = match opts.policy {
        ThetaPolicy::Eigen => {
            let eig = eig_decompose(&inst.shifted_objective)?;
            (0..eig.len()).map(|i| eig.vector(i)).collect()
        }
        ThetaPolicy::Oracle => Vec::new(),
    };
    let mut s = CutSet::new();
    let mut points = Vec::new();
    loop {
        let report = solve(&build_ls(&sdp, &s)?, &opts.solver)?;
        if report.status != SolveStatus::Optimal {
            report.require_optimal()?;
        }
        let point = ThetaPoint {
            cuts: s.len(),
            objective: report.objective,
            ratio: reference / report.objective,
        };
        let x = report.primal_x.as_ref().expect("optimal reports carry a matrix");
        let negative = negative_directions(x, opts.psd_tol)?;
        let converged = negative.is_empty();
        let reached = opts.target_ratio.is_some_and(|t| point.ratio >= t);
        let mut added = 0;
        if !reached && !(converged && pending.is_empty()) && s.len() < opts.budget {
            let room = opts.budget - s.len();
            let want = if pending.is_empty() {
                opts.oracle_batch.min(room)
            } else {
                opts.batch.min(room)
            };
            while added < want {
                let Some(v) = pending.pop() else { break };
                if s.insert(v, Provenance::Eigen)? {
                    added += 1;
                }
            }
            for d in negative {
                if added >= want {
                    break;
                }
                if s.insert(d.vector, Provenance::Oracle)? {
                    added += 1;
                }
            }
        }
        if added == 0 || point.cuts.is_multiple_of(opts.batch) {
            points.push(point);
        }
        if added == 0 {
            return Ok(ThetaTrace {
                reference,
                points,
                converged,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(g: &Graph) -> f64 {
        theta_reference(g, &ReferenceOptions::default()).unwrap().objective
    }

    #[test]
    fn shifted_objective_zeroes_edges() {
        let t = ThetaInstance::new(&Graph::cycle(5).unwrap());
        assert_eq!(t.shifted_objective.get(0, 1), 0.0);
        assert_eq!(t.shifted_objective.get(0, 2), 1.0);
        assert_eq!(t.shifted_objective.diagonal(), vec![1.0; 5]);
    }

    #[test]
    fn spot_values() {
        assert!((reference(&Graph::cycle(5).unwrap()) - 5f64.sqrt()).abs() < 1e-4);
        assert!((reference(&Graph::complete(4)) - 1.0).abs() < 1e-4);
        assert!((reference(&Graph::empty(4)) - 4.0).abs() < 1e-4);
        assert!((reference(&Graph::petersen()) - 4.0).abs() < 1e-4);
    }

    #[test]
    fn empty_graph_with_eigen_cuts() {
        let g = Graph::empty(4);
        let t = ThetaInstance::new(&g);
        let s = CutSet::eigenbasis(&t.shifted_objective).unwrap();
        let r = solve(&build_ltn(&t, &s, false).unwrap(), &SolverOptions::default()).unwrap();
        assert!((r.objective - 4.0).abs() < 1e-6);
    }

    #[test]
    fn socp_rows_tighten() {
        let g = Graph::cycle(7).unwrap();
        let t = ThetaInstance::new(&g);
        let s = CutSet::standard_basis(7);
        let off = solve(&build_ltn(&t, &s, false).unwrap(), &SolverOptions::default()).unwrap();
        let on = solve(&build_ltn(&t, &s, true).unwrap(), &SolverOptions::default()).unwrap();
        assert!(on.objective <= off.objective + 1e-7);
        assert!(on.objective < off.objective - 1e-3);
    }

    #[test]
    fn experiment_trace_is_monotone_and_converges_on_k3() {
        let g = Graph::complete(3);
        let opts = ThetaOptions {
            policy: ThetaPolicy::Oracle,
            budget: 40,
            batch: 5,
            ..Default::default()
        };
        let tr = theta_experiment(&g, 1.0, &opts).unwrap();
        for w in tr.points.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-7);
        }
        assert!(tr.final_ratio() > 0.999, "{:?}", tr.points.last());
    }

    #[test]
    fn rejects_bad_batch() {
        let opts = ThetaOptions {
            budget: 5,
            batch: 10,
            ..Default::default()
        };
        assert!(theta_experiment(&Graph::complete(3), 1.0, &opts).is_err());
    }
}

use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use sdprelax::engine::{
    cutting_plane, reference_sdp, solve, CutSet, CuttingPlaneOptions, ReferenceMethod, ReferenceOptions, SolveReport,
    SolveStatus, SolverOptions, TracePoint, PSD_TOL,
};
use sdprelax::linalg::{eig_decompose, min_eig_cut};
use sdprelax::maxcut::{
    brute_force_cut, build_sd, build_sp, eigen_cuts, eigenvalue_bound, greedy_cut, gw_instance, gw_round, gw_value,
    rounding_matrix, sweep_cut, unit_diagonal, CutMethod, CutResult,
};

use crate::instance::InstanceArgs;
use crate::report::{cell, CliError, Report, Tolerances};
use crate::{OutputArgs, SdpRef};

/// Column layout of the max-cut results table.
pub const TABLE_COLUMNS: [&str; 8] = [
    "Graph",
    "Optimality gap",
    "LP Gap",
    "LP cut value",
    "Greedy",
    "sweep",
    "GW",
    "OPT",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cuts {
    /// The eigenbasis of W.
    Eigen,
    /// Separation-oracle cuts from the empty set.
    Oracle,
    /// Oracle cuts on top of the eigenbasis.
    Hybrid,
}

#[derive(clap::Args, Debug, Clone)]
pub struct MaxcutArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = Cuts::Eigen)]
    pub cuts: Cuts,
    #[arg(long, value_enum, default_value_t = SdpRef::None)]
    pub sdp_ref: SdpRef,
    /// Hyperplane rounding trials; 0 disables rounding.
    #[arg(long, default_value_t = 100)]
    pub rounds: usize,
    /// Also run the greedy and sweep heuristics.
    #[arg(long)]
    pub baselines: bool,
    /// Also compute the optimum cut by enumeration (small graphs only).
    #[arg(long)]
    pub exact: bool,
    /// PSD acceptance tolerance for oracle cuts and the cutting-plane reference.
    #[arg(long, default_value_t = PSD_TOL)]
    pub tol: f64,
    /// Oracle cut budget for `--cuts oracle|hybrid`.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    /// Oracle cuts added per solve.
    #[arg(long, default_value_t = 1)]
    pub batch: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutSummary {
    pub value: f64,
    pub method: CutMethod,
}

impl From<&CutResult> for CutSummary {
    fn from(c: &CutResult) -> Self {
        Self {
            value: c.value,
            method: c.method,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BestCut {
    pub value: f64,
    pub method: CutMethod,
    /// `+1` / `-1` per vertex.
    pub side: Vec<i8>,
}

/// Relaxation objectives are given raw (`z = <-W, X>`) and on the cut scale
/// (`value = m/2 + z/4`); gaps use the cut scale.
#[derive(Clone, Debug, Serialize)]
pub struct MaxcutResult {
    pub cuts: Cuts,
    pub num_cuts: usize,
    pub converged: bool,
    pub z_sp: f64,
    pub value_sp: f64,
    pub z_sd: Option<f64>,
    pub value_sd: Option<f64>,
    pub sdp_ref: Option<&'static str>,
    pub z_ref: Option<f64>,
    pub value_ref: Option<f64>,
    pub eigenvalue_bound: f64,
    pub lp_gap: Option<f64>,
    pub opt_gap: Option<f64>,
    pub rounding_trials: usize,
    pub rounded_cut: Option<f64>,
    pub gw_cut: Option<f64>,
    pub baselines: Vec<CutSummary>,
    pub optimum: Option<f64>,
    pub best_cut: Option<BestCut>,
    /// Raw SP objective after each solve, keyed by cut count.
    pub trace: Vec<TracePoint>,
}

impl MaxcutResult {
    fn baseline(&self, m: CutMethod) -> Option<f64> {
        self.baselines.iter().find(|b| b.method == m).map(|b| b.value)
    }

    pub fn table_row(&self, graph: &str) -> Vec<String> {
        vec![
            graph.to_string(),
            cell(self.opt_gap),
            cell(self.lp_gap),
            cell(self.rounded_cut),
            cell(self.baseline(CutMethod::Greedy)),
            cell(self.baseline(CutMethod::Sweep)),
            cell(self.gw_cut),
            cell(self.optimum),
        ]
    }
}

fn require(report: SolveReport) -> Result<SolveReport, CliError> {
    report.require_optimal()?;
    Ok(report)
}

/// A GW-feasible matrix from a reference optimum: clip negative eigenvalues, then rescale to a unit diagonal.
fn gw_feasible(x: &sdprelax::SymMatrix) -> Result<sdprelax::SymMatrix, CliError> {
    let projected = eig_decompose(x)?.reconstruct_with(|l| l.max(0.0));
    Ok(unit_diagonal(projected))
}

pub fn run(args: &MaxcutArgs, bases: &[PathBuf]) -> Result<Report, CliError> {
    let start = Instant::now();
    let (g, info) = args.instance.load(bases)?;
    let mut report = Report::new("maxcut", info, Tolerances::new(args.tol));
    let solver = SolverOptions::default();
    let t = &mut report.timings;

    let clock = Instant::now();
    let eig_set = eigen_cuts(&g)?;
    let bound = eigenvalue_bound(&g)?;
    t.eig = clock.elapsed().as_secs_f64();

    let (sp, s, trace, converged) = match args.cuts {
        Cuts::Eigen => {
            let clock = Instant::now();
            let model = build_sp(&g, &eig_set)?;
            t.build += clock.elapsed().as_secs_f64();
            let clock = Instant::now();
            let sp = require(solve(&model, &solver)?)?;
            t.solve += clock.elapsed().as_secs_f64();
            let x = sp.primal_x.as_ref().expect("optimal reports carry a matrix");
            let converged = min_eig_cut(x, args.tol)?.is_none();
            let trace = vec![TracePoint {
                cuts: eig_set.len(),
                objective: sp.objective,
            }];
            (sp, eig_set, trace, converged)
        }
        Cuts::Oracle | Cuts::Hybrid => {
            let s0 = if args.cuts == Cuts::Hybrid { eig_set } else { CutSet::new() };
            let opts = CuttingPlaneOptions {
                budget: args.budget,
                batch: args.batch,
                psd_tol: args.tol,
                solver: solver.clone(),
            };
            let clock = Instant::now();
            let out = cutting_plane(&gw_instance(&g), &s0, &opts)?;
            t.solve += clock.elapsed().as_secs_f64();
            // an exhausted budget still leaves a valid relaxation optimum
            let mut sp = out.report;
            if sp.status == SolveStatus::IterationLimit {
                sp.status = SolveStatus::Optimal;
            }
            (require(sp)?, out.cuts, out.trace, out.converged)
        }
    };
    let z_sp = sp.objective;

    let z_sd = if s.is_empty() {
        None
    } else {
        let clock = Instant::now();
        let model = build_sd(&g, &s)?;
        t.build += clock.elapsed().as_secs_f64();
        let clock = Instant::now();
        let sd = require(solve(&model, &solver)?)?;
        t.solve += clock.elapsed().as_secs_f64();
        Some(sd.objective)
    };

    let reference = match args.sdp_ref {
        SdpRef::None => None,
        SdpRef::Conic | SdpRef::CuttingPlane => {
            let opts = ReferenceOptions {
                method: if args.sdp_ref == SdpRef::Conic {
                    ReferenceMethod::Conic
                } else {
                    ReferenceMethod::CuttingPlane
                },
                psd_tol: args.tol,
                ..Default::default()
            };
            let clock = Instant::now();
            let r = require(reference_sdp(&gw_instance(&g), &opts)?)?;
            t.reference = clock.elapsed().as_secs_f64();
            Some(r)
        }
    };

    let clock = Instant::now();
    let rounded = if args.rounds > 0 {
        let y = rounding_matrix(&g, &sp, &solver)?;
        Some(gw_round(&g, &y, args.rounds, args.instance.seed)?)
    } else {
        None
    };
    let gw = match (&reference, args.rounds) {
        (Some(r), rounds) if rounds > 0 => {
            let y = gw_feasible(r.primal_x.as_ref().expect("optimal reports carry a matrix"))?;
            Some(gw_round(&g, &y, rounds, args.instance.seed)?)
        }
        _ => None,
    };
    let baselines = if args.baselines {
        vec![greedy_cut(&g), sweep_cut(&g)]
    } else {
        Vec::new()
    };
    let optimum = if args.exact { Some(brute_force_cut(&g)?) } else { None };
    t.rounding = clock.elapsed().as_secs_f64();

    let best = rounded
        .iter()
        .chain(&baselines)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .map(|c| BestCut {
            value: c.value,
            method: c.method,
            side: c.side.clone(),
        });

    let value = |z: f64| gw_value(&g, z);
    let value_sp = value(z_sp);
    let value_sd = z_sd.map(value);
    let z_ref = reference.as_ref().map(|r| r.objective);
    let value_ref = z_ref.map(value);
    report.maxcut = Some(MaxcutResult {
        cuts: args.cuts,
        num_cuts: s.len(),
        converged,
        z_sp,
        value_sp,
        z_sd,
        value_sd,
        sdp_ref: match args.sdp_ref {
            SdpRef::None => None,
            SdpRef::Conic => Some("conic"),
            SdpRef::CuttingPlane => Some("cutting-plane"),
        },
        z_ref,
        value_ref,
        eigenvalue_bound: bound,
        lp_gap: value_sd.map(|v| value_sp / v),
        opt_gap: value_ref.map(|v| value_sp / v),
        rounding_trials: args.rounds,
        rounded_cut: rounded.as_ref().map(|c| c.value),
        gw_cut: gw.as_ref().map(|c| c.value),
        baselines: baselines.iter().map(CutSummary::from).collect(),
        optimum: optimum.as_ref().map(|c| c.value),
        best_cut: best,
        trace,
    });
    report.timings.total = start.elapsed().as_secs_f64();
    Ok(report)
}

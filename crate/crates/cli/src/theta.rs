use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use sdprelax::engine::{ReferenceMethod, ReferenceOptions, PSD_TOL};
use sdprelax::theta::{theta_experiment, theta_reference, ThetaOptions, ThetaPoint, ThetaPolicy};

use crate::instance::InstanceArgs;
use crate::report::{CliError, Report, Tolerances};
use crate::OutputArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaCuts {
    /// Eigenvectors of `J - W` by ascending eigenvalue, then oracle cuts.
    Eigen,
    /// Oracle cuts only.
    Oracle,
}

/// Reference methods for theta; the value is always needed for the ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThetaRef {
    Conic,
    CuttingPlane,
}

#[derive(clap::Args, Debug, Clone)]
pub struct ThetaArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = ThetaCuts::Eigen)]
    pub cuts: ThetaCuts,
    #[arg(long, value_enum, default_value_t = ThetaRef::Conic)]
    pub sdp_ref: ThetaRef,
    /// Add the second-order-cone rows on every 2x2 principal minor.
    #[arg(long)]
    pub socp: bool,
    /// Total number of cuts.
    #[arg(long, default_value_t = 500)]
    pub budget: usize,
    /// Eigenvectors per solve, and the spacing of recorded trace points.
    #[arg(long, default_value_t = 20)]
    pub batch: usize,
    /// Oracle cuts per solve.
    #[arg(long, default_value_t = 1)]
    pub oracle_batch: usize,
    /// Stop once theta over the relaxation value reaches this.
    #[arg(long)]
    pub target: Option<f64>,
    #[arg(long, default_value_t = PSD_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaResult {
    pub cuts: ThetaCuts,
    pub socp: bool,
    pub sdp_ref: &'static str,
    pub z_ref: f64,
    pub final_objective: f64,
    pub final_ratio: f64,
    pub converged: bool,
    /// Relaxation value and `z_ref / value` every `batch` cuts.
    pub trace: Vec<ThetaPoint>,
}

impl ThetaResult {
    pub fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<(), CliError> {
        w.write_record(["cuts", "objective", "ratio"])?;
        for p in &self.trace {
            w.write_record([p.cuts.to_string(), p.objective.to_string(), p.ratio.to_string()])?;
        }
        Ok(())
    }
}

pub fn run(args: &ThetaArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let (g, info) = args.instance.load(&[])?;
    let mut report = Report::new("theta", info, Tolerances::new(args.tol));
    let ref_opts = ReferenceOptions {
        method: match args.sdp_ref {
            ThetaRef::Conic => ReferenceMethod::Conic,
            ThetaRef::CuttingPlane => ReferenceMethod::CuttingPlane,
        },
        psd_tol: args.tol,
        ..Default::default()
    };
    let clock = Instant::now();
    let z_ref = theta_reference(&g, &ref_opts)?.objective;
    report.timings.reference = clock.elapsed().as_secs_f64();

    let opts = ThetaOptions {
        policy: match args.cuts {
            ThetaCuts::Eigen => ThetaPolicy::Eigen,
            ThetaCuts::Oracle => ThetaPolicy::Oracle,
        },
        socp: args.socp,
        budget: args.budget,
        batch: args.batch,
        oracle_batch: args.oracle_batch,
        target_ratio: args.target,
        psd_tol: args.tol,
        ..Default::default()
    };
    let clock = Instant::now();
    let trace = theta_experiment(&g, z_ref, &opts)?;
    report.timings.solve = clock.elapsed().as_secs_f64();
    let last = *trace.points.last().expect("a trace has at least one point");
    report.theta = Some(ThetaResult {
        cuts: args.cuts,
        socp: args.socp,
        sdp_ref: match args.sdp_ref {
            ThetaRef::Conic => "conic",
            ThetaRef::CuttingPlane => "cutting-plane",
        },
        z_ref,
        final_objective: last.objective,
        final_ratio: last.ratio,
        converged: trace.converged,
        trace: trace.points,
    });
    report.timings.total = start.elapsed().as_secs_f64();
    Ok(report)
}

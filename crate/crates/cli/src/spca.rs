use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use sdprelax::engine::{ReferenceMethod, ReferenceOptions, PSD_TOL};
use sdprelax::io::parse_csv_labeled;
use sdprelax::spca::{explained_variance, sparse_pca, spca_reference, CovMatrix, CutPolicy, SparsePcaOptions, SyntheticModel};

use crate::instance::resolve_path;
use crate::maxcut::Cuts;
use crate::report::{CliError, InstanceInfo, Report, Tolerances};
use crate::{OutputArgs, SdpRef};

#[derive(clap::Args, Debug, Clone)]
pub struct SpcaArgs {
    /// Covariance or correlation matrix as CSV (optional header row).
    #[arg(value_name = "MATRIX", required_unless_present = "synthetic", conflicts_with = "synthetic")]
    pub matrix: Option<PathBuf>,
    /// Use the ten-variable hidden-factor model instead of a file.
    #[arg(long)]
    pub synthetic: bool,
    /// With `--synthetic`, estimate the covariance from this many seeded draws
    /// instead of using the exact model covariance.
    #[arg(long, requires = "synthetic")]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sparsity of each component, e.g. `--k 5,2,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    /// Coefficient of the pairwise rows `X_ii + X_jj +- 2 alpha X_ij >= 0`.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Cuts::Eigen)]
    pub cuts: Cuts,
    /// Oracle cut budget per component for `--cuts oracle|hybrid`.
    #[arg(long, default_value_t = 100)]
    pub budget: usize,
    /// Also solve the exact SDP for the first component.
    #[arg(long, value_enum, default_value_t = SdpRef::None)]
    pub sdp_ref: SdpRef,
    /// PSD acceptance tolerance for the cutting-plane reference.
    #[arg(long, default_value_t = PSD_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub k: usize,
    /// 1-based variable indices.
    pub support: Vec<usize>,
    pub support_labels: Option<Vec<String>>,
    pub loading: Vec<f64>,
    /// `x^T C x` on the input covariance.
    pub objective: f64,
    pub relaxation_value: f64,
    /// Adjusted explained variance of this and all earlier components.
    pub cumulative_explained_variance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpcaResult {
    pub alpha: f64,
    pub cuts: Cuts,
    pub labels: Option<Vec<String>>,
    pub components: Vec<ComponentReport>,
    pub explained_variance: f64,
    pub sdp_ref: Option<&'static str>,
    /// Exact SDP value for the first component.
    pub z_ref: Option<f64>,
    /// `z_ref` over the first relaxation value.
    pub ref_ratio: Option<f64>,
}

impl SpcaResult {
    pub fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<(), CliError> {
        w.write_record([
            "component",
            "k",
            "support",
            "objective",
            "relaxation_value",
            "cumulative_explained_variance",
        ])?;
        for (i, c) in self.components.iter().enumerate() {
            let support = match &c.support_labels {
                Some(l) => l.join(" "),
                None => c.support.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
            };
            w.write_record([
                (i + 1).to_string(),
                c.k.to_string(),
                support,
                c.objective.to_string(),
                c.relaxation_value.to_string(),
                c.cumulative_explained_variance.to_string(),
            ])?;
        }
        Ok(())
    }
}

fn load(args: &SpcaArgs) -> Result<(CovMatrix, Option<Vec<String>>, InstanceInfo), CliError> {
    if args.synthetic {
        let model = SyntheticModel::default();
        let (c, seed) = match args.samples {
            Some(n) => (model.sample_covariance(n, args.seed)?, Some(args.seed)),
            None => (model.covariance()?, None),
        };
        let name = match args.samples {
            Some(n) => format!("synthetic:samples={n}#{}", args.seed),
            None => "synthetic".to_string(),
        };
        let info = InstanceInfo {
            source: "synthetic",
            name,
            path: None,
            format: None,
            generator: None,
            seed,
            n: c.dim(),
            m_total: None,
        };
        return Ok((c, None, info));
    }
    let path = resolve_path(args.matrix.as_ref().expect("clap requires a matrix"), &[]);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let lm = parse_csv_labeled(&text)?;
    let c = CovMatrix::new(lm.matrix)?;
    let info = InstanceInfo {
        source: "file",
        name: path
            .file_name()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned()),
        path: Some(path.display().to_string()),
        format: Some("csv-matrix".into()),
        generator: None,
        seed: None,
        n: c.dim(),
        m_total: None,
    };
    Ok((c, lm.labels, info))
}

pub fn run(args: &SpcaArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let (c, labels, info) = load(args)?;
    let mut report = Report::new("spca", info, Tolerances::new(args.tol));
    let opts = SparsePcaOptions {
        alpha: args.alpha,
        policy: match args.cuts {
            Cuts::Eigen => CutPolicy::Eigen,
            Cuts::Oracle => CutPolicy::Oracle,
            Cuts::Hybrid => CutPolicy::Hybrid,
        },
        budget: args.budget,
        ..Default::default()
    };
    let clock = Instant::now();
    let comps = sparse_pca(&c, &args.k, &opts)?;
    report.timings.solve = clock.elapsed().as_secs_f64();

    let mut components = Vec::with_capacity(comps.len());
    for (i, comp) in comps.iter().enumerate() {
        let loadings: Vec<Vec<f64>> = comps[..=i].iter().map(|c| c.loading.clone()).collect();
        components.push(ComponentReport {
            k: args.k[i],
            support: comp.support.iter().map(|&j| j + 1).collect(),
            support_labels: labels
                .as_ref()
                .map(|l| comp.support.iter().map(|&j| l[j].clone()).collect()),
            loading: comp.loading.clone(),
            objective: comp.objective,
            relaxation_value: comp.relaxation_value,
            cumulative_explained_variance: explained_variance(&c, &loadings)?,
        });
    }

    let z_ref = match args.sdp_ref {
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
            let r = spca_reference(&c, args.k[0], &opts)?;
            report.timings.reference = clock.elapsed().as_secs_f64();
            Some(r.objective)
        }
    };
    let explained = components.last().map_or(0.0, |c| c.cumulative_explained_variance);
    report.spca = Some(SpcaResult {
        alpha: args.alpha,
        cuts: args.cuts,
        labels,
        ref_ratio: z_ref.map(|z| z / components[0].relaxation_value),
        components,
        explained_variance: explained,
        sdp_ref: match args.sdp_ref {
            SdpRef::None => None,
            SdpRef::Conic => Some("conic"),
            SdpRef::CuttingPlane => Some("cutting-plane"),
        },
        z_ref,
    });
    report.timings.total = start.elapsed().as_secs_f64();
    Ok(report)
}

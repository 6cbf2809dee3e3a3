//! The JSON report shared by all subcommands, its CSV renderings, and the
//! error object printed on failure. `schemas/report.schema.json` describes the
//! JSON form; bump `SCHEMA_VERSION` with it.

use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use crate::maxcut::MaxcutResult;
use crate::spca::SpcaResult;
use crate::theta::ThetaResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        Self {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new("io", format!("{}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind, "message": self.message } }).to_string()
    }
}

impl From<sdprelax::Error> for CliError {
    fn from(e: sdprelax::Error) -> Self {
        use sdprelax::Error as E;
        let kind = match &e {
            E::InvalidMatrix(_) => "invalid-matrix",
            E::DimensionMismatch { .. } => "dimension-mismatch",
            E::InvalidParameter(_) => "invalid-parameter",
            E::EmptyCutSet => "empty-cut-set",
            E::ConeUnsupported(_) => "cone-unsupported",
            E::NumericalFailure(_) => "numerical-failure",
            E::DegenerateComponent => "degenerate-component",
            E::InvalidGraph(_) => "invalid-graph",
            E::Parse { .. } => "parse",
            E::Generator(_) => "generator",
        };
        Self::new(kind, e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::new("io", e.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Software {
    pub name: &'static str,
    pub version: &'static str,
    pub rng: &'static str,
}

impl Default for Software {
    fn default() -> Self {
        Self {
            name: "sdprelax",
            version: env!("CARGO_PKG_VERSION"),
            rng: sdprelax::gen::RNG_ALGORITHM,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceInfo {
    /// `file`, `generator` or `synthetic`.
    pub source: &'static str,
    pub name: String,
    pub path: Option<String>,
    pub format: Option<String>,
    pub generator: Option<String>,
    pub seed: Option<u64>,
    pub n: usize,
    pub m_total: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub feas: f64,
    pub psd: f64,
    pub solver: f64,
}

impl Tolerances {
    pub fn new(psd: f64) -> Self {
        let s = sdprelax::engine::SolverOptions::default();
        Self {
            feas: s.feas_tol,
            psd,
            solver: s.solver_tol,
        }
    }
}

/// Wall-clock seconds. Every field that varies between identical runs lives here.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub eig: f64,
    pub build: f64,
    pub solve: f64,
    pub reference: f64,
    pub rounding: f64,
    pub total: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub software: Software,
    pub command: &'static str,
    pub instance: InstanceInfo,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maxcut: Option<MaxcutResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spca: Option<SpcaResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaResult>,
    pub timings: Timings,
}

impl Report {
    pub fn new(command: &'static str, instance: InstanceInfo, tolerances: Tolerances) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            software: Software::default(),
            command,
            instance,
            tolerances,
            maxcut: None,
            spca: None,
            theta: None,
            timings: Timings::default(),
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::new("io", e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if let Some(m) = &self.maxcut {
                    w.write_record(crate::maxcut::TABLE_COLUMNS)?;
                    w.write_record(m.table_row(&self.instance.name))?;
                } else if let Some(s) = &self.spca {
                    s.write_csv(&mut w)?;
                } else if let Some(t) = &self.theta {
                    t.write_csv(&mut w)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::new("io", e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
        }
    }
}

/// Formats an optional number for a CSV cell.
pub fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x}"))
}

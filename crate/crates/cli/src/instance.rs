//! Graph instance selection shared by `maxcut`, `theta` and `bench`.

use std::path::{Path, PathBuf};

use sdprelax::io::{FileFormat, GeneratorSpec, InstanceSpec};
use sdprelax::Graph;

use crate::report::{CliError, InstanceInfo};

/// Directory searched for relative instance paths that do not exist as given.
pub const FIXTURE_DIR_VAR: &str = "SDPRELAX_FIXTURES";

#[derive(clap::Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Random graph, e.g. `er:n=50,p=0.25`, `regular:n=50,d=6`, `planted:n=64,d=4,l=5`.
    #[arg(long = "gen", value_name = "SPEC", conflicts_with = "file", required_unless_present = "file")]
    pub generator: Option<String>,
    /// Edge list, TSPLIB (`.tsp`) or CSV adjacency matrix (`.csv`).
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Overrides the format guessed from the file extension.
    #[arg(long, value_name = "edgelist|tsplib|csv-matrix")]
    pub input_format: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Finds `path` as given, then relative to each of `bases`, then in the fixture directory.
pub fn resolve_path(path: &Path, bases: &[PathBuf]) -> PathBuf {
    if path.is_absolute() || path.exists() {
        return path.to_path_buf();
    }
    let env_dir = std::env::var_os(FIXTURE_DIR_VAR).map(PathBuf::from);
    bases
        .iter()
        .chain(env_dir.iter())
        .map(|b| b.join(path))
        .find(|p| p.exists())
        .unwrap_or_else(|| path.to_path_buf())
}

impl InstanceArgs {
    pub fn spec(&self, bases: &[PathBuf]) -> Result<InstanceSpec, CliError> {
        if let Some(g) = &self.generator {
            let spec: GeneratorSpec = g.parse()?;
            return Ok(InstanceSpec::Generator { spec, seed: self.seed });
        }
        let path = self.file.as_ref().expect("clap requires --gen or --file");
        let path = resolve_path(path, bases);
        let format = match &self.input_format {
            Some(f) => f.parse()?,
            None => FileFormat::from_path(&path),
        };
        Ok(InstanceSpec::File { path, format })
    }

    /// Loads the graph and describes it for the report.
    pub fn load(&self, bases: &[PathBuf]) -> Result<(Graph, InstanceInfo), CliError> {
        let spec = self.spec(bases)?;
        let g = spec.load()?;
        let mut info = InstanceInfo {
            source: "file",
            name: spec.describe(),
            path: None,
            format: None,
            generator: None,
            seed: None,
            n: g.n(),
            m_total: Some(g.m_total()),
        };
        match &spec {
            InstanceSpec::File { path, format } => {
                info.path = Some(path.display().to_string());
                info.format = Some(format_name(*format).to_string());
            }
            InstanceSpec::Generator { spec, seed } => {
                info.source = "generator";
                info.generator = Some(spec.to_string());
                info.seed = Some(*seed);
            }
        }
        Ok((g, info))
    }
}

fn format_name(f: FileFormat) -> &'static str {
    match f {
        FileFormat::Edgelist => "edgelist",
        FileFormat::Tsplib => "tsplib",
        FileFormat::CsvMatrix => "csv-matrix",
    }
}

//! Batch driver. A manifest holds one `maxcut` argument list per line, e.g.
//!
//! ```text
//! # graph            seed
//! --gen er:n=30,p=0.3 --seed 1 --baselines
//! --file petersen.edges --exact
//! ```
//!
//! Relative paths are looked up next to the manifest first. Every line gets a
//! report file; a failing line is recorded in `summary.json` and does not stop
//! the others.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::Parser;
use serde::Serialize;

use crate::maxcut::{self, MaxcutArgs, TABLE_COLUMNS};
use crate::report::{CliError, Report};

/// Exit status when some manifest lines failed.
pub const PARTIAL_FAILURE: u8 = 3;

#[derive(clap::Args, Debug, Clone)]
pub struct BenchArgs {
    pub manifest: PathBuf,
    /// Directory for the per-line reports, `aggregate.csv` and `summary.json`.
    #[arg(long, default_value = "bench-out")]
    pub out_dir: PathBuf,
    /// Manifest lines evaluated concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Parses a manifest line as the arguments of `sdprelax maxcut`.
#[derive(Parser, Debug)]
#[command(name = "maxcut", no_binary_name = true)]
struct Line {
    #[command(flatten)]
    args: MaxcutArgs,
}

#[derive(Serialize)]
struct RowSummary {
    line: usize,
    args: String,
    status: &'static str,
    report: Option<String>,
    error: Option<serde_json::Value>,
}

fn run_line(text: &str, bases: &[PathBuf]) -> Result<Report, CliError> {
    let line = Line::try_parse_from(text.split_whitespace()).map_err(|e| CliError::new("usage", e.to_string()))?;
    maxcut::run(&line.args, bases)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn run(args: &BenchArgs) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(&args.manifest).map_err(|e| CliError::io(&args.manifest, e))?;
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let bases: Vec<PathBuf> = args.manifest.parent().map(Path::to_path_buf).into_iter().collect();
    std::fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;

    let results: Mutex<Vec<Option<Result<Report, CliError>>>> = Mutex::new((0..rows.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.clamp(1, rows.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(_, line)) = rows.get(i) else { return };
                let r = run_line(line, &bases);
                results.lock().expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    let results = results.into_inner().expect("workers have finished");

    let mut table = csv::Writer::from_writer(Vec::new());
    table.write_record(TABLE_COLUMNS)?;
    let mut summary = Vec::with_capacity(rows.len());
    let mut failed = 0;
    for ((line_no, line), result) in rows.iter().zip(results) {
        let mut row = RowSummary {
            line: *line_no,
            args: line.to_string(),
            status: "ok",
            report: None,
            error: None,
        };
        match result.expect("every row was evaluated") {
            Ok(report) => {
                let name = format!("line{line_no:04}.json");
                write(&args.out_dir.join(&name), &report.render(crate::report::OutputFormat::Json)?)?;
                let m = report.maxcut.as_ref().expect("maxcut reports carry a maxcut section");
                table.write_record(m.table_row(&report.instance.name))?;
                row.report = Some(name);
            }
            Err(e) => {
                failed += 1;
                row.status = "error";
                row.error = Some(serde_json::from_str(&e.to_json()).expect("error json round-trips"));
            }
        }
        summary.push(row);
    }
    let table = table.into_inner().map_err(|e| CliError::new("io", e.to_string()))?;
    write(&args.out_dir.join("aggregate.csv"), &String::from_utf8(table).expect("csv output is utf-8"))?;
    let mut s = serde_json::to_string_pretty(&summary).map_err(|e| CliError::new("io", e.to_string()))?;
    s.push('\n');
    write(&args.out_dir.join("summary.json"), &s)?;

    if failed > 0 {
        eprintln!(
            "{}",
            serde_json::json!({ "error": { "kind": "partial-failure", "message": format!("{failed} of {} manifest lines failed", rows.len()) } })
        );
        return Ok(ExitCode::from(PARTIAL_FAILURE));
    }
    Ok(ExitCode::SUCCESS)
}

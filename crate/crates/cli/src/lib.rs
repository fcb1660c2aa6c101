//! Config-driven experiment runner.

pub mod config;
pub mod examples;
pub mod experiments;
pub mod parse;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Parser;

use config::{Format, Source};
use experiments::Overrides;
use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "weakverify", version, about = "Run verifier experiments from a TOML config")]
pub struct Args {
    /// Experiment config (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Override the number of trials.
    #[arg(long)]
    pub trials: Option<u64>,
}

/// Exit codes: 0 all claims hold, 2 some claim fails, 1 config or runtime error.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(report) => {
            let mut err = std::io::stderr().lock();
            for line in report.summary() {
                let _ = writeln!(err, "{line}");
            }
            if report.passed() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub fn execute(args: &Args) -> Result<RunReport> {
    let src = Source::load(&args.config)?;
    let overrides = Overrides { seed: args.seed, trials: args.trials };
    let report = experiments::run(&src, &overrides)?;
    let out = src.config.output.as_ref();
    let path = args.output.clone().or_else(|| out.and_then(|o| o.path.clone()));
    let format = args
        .format
        .or_else(|| out.and_then(|o| o.format))
        .or_else(|| path.as_ref().and_then(|p| p.extension()).is_some_and(|e| e == "json").then_some(Format::Json))
        .unwrap_or(Format::Csv);
    write_report(&report, path.as_deref(), format)?;
    Ok(report)
}

/// `report.csv` → `report-2.csv` for the second of several tables.
fn numbered(path: &Path, i: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{i}"),
    };
    path.with_file_name(name)
}

pub fn write_report(report: &RunReport, path: Option<&Path>, format: Format) -> Result<()> {
    let outputs: Vec<(Option<PathBuf>, String)> = match format {
        Format::Json => vec![(path.map(Path::to_path_buf), report.to_json())],
        Format::Csv => {
            let tables = report.to_csv_tables();
            let many = tables.len() > 1;
            tables
                .into_iter()
                .enumerate()
                .map(|(i, t)| (path.map(|p| if many { numbered(p, i + 1) } else { p.to_path_buf() }), t))
                .collect()
        }
    };
    let mut stdout = std::io::stdout().lock();
    for (i, (p, text)) in outputs.iter().enumerate() {
        match p {
            Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
            None => {
                if i > 0 {
                    writeln!(stdout)?;
                }
                stdout.write_all(text.as_bytes())?;
            }
        }
    }
    Ok(())
}

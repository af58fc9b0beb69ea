//! Command-line front end for the `uavcov` models.
//!
//! Every command writes a CSV whose leading `#` lines carry the tool
//! version, the command, and the fully resolved configuration as JSON.
//! Passing such a CSV back through `--config` reproduces it byte for byte.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod table;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub use args::{parse_args, RunConfig};
pub use config::{Command, ConfigFile, Settings};
pub use error::CliError;
pub use table::{emit_table, format_sig9, OutputTable};

/// Sibling path for the scenario summary: `runs/a.csv` -> `runs/a.summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.csv"))
}

/// Executes a parsed invocation, on a dedicated pool when `workers` is set.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let output = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Invalid(format!("--workers: {e}")))?
            .install(|| commands::execute(&cfg.settings))?,
        None => commands::execute(&cfg.settings)?,
    };
    emit_table(&output.table, cfg.out.as_deref(), cfg.plot)?;
    if let Some(summary) = &output.summary {
        let table = commands::summary_table(summary, output.table.metadata.clone());
        match &cfg.out {
            Some(out) => emit_table(&table, Some(&summary_path(out)), false)?,
            None => {
                let bytes = table.to_csv()?;
                eprint!("{}", String::from_utf8_lossy(&bytes));
            }
        }
    }
    Ok(())
}

/// Parses and runs; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv).and_then(|cfg| run(&cfg)) {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("uavcov: {e}");
            e.exit_code()
        }
    }
}

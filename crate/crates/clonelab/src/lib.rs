//! Experiment driver for `clonelab-core`.
//!
//! Every subcommand produces a [`Report`]: a CSV table with a documented
//! header and a list of run-level checks. The process exits with 0 when all
//! checks pass, 1 when a numerical check fails and 2 on usage or
//! configuration errors.
//!
//! Output is a function of the subcommand, its flags and the master seed
//! only. Floating-point fields are printed with 12 significant digits, and
//! the bytes do not change between `--serial` and parallel runs.

pub mod args;
pub mod experiments;
pub mod json;
pub mod table;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub use args::{Cli, Command};
pub use experiments::Ctx;
pub use table::{Cell, Check, Report, Table};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the parsed command, on one thread if `--serial` was given.
pub fn run(cli: &Cli) -> Result<Report> {
    let ctx = Ctx { seed: cli.seed, trials: cli.trials, tol: cli.tol };
    if let Some(tol) = cli.tol {
        anyhow::ensure!(tol.is_finite() && tol >= 0.0, "--tol must be a nonnegative number");
    }
    if cli.serial {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build()?;
        pool.install(|| experiments::dispatch(&cli.command, ctx))
    } else {
        experiments::dispatch(&cli.command, ctx)
    }
}

/// `x.csv` becomes `x.summary.json`.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

/// Writes the CSV and summary to `out`, or the CSV to stdout and the summary
/// to stderr.
pub fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let csv = report.table.to_csv();
    let summary = report.summary_json();
    match out {
        Some(path) => {
            std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            let sp = summary_path(path);
            std::fs::write(&sp, summary).with_context(|| format!("writing {}", sp.display()))?;
        }
        None => {
            print!("{csv}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

use std::process::ExitCode;

use clap::Parser;
use clonelab::{emit, run, Cli, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli).and_then(|report| emit(&report, cli.out.as_deref()).map(|()| report.passed())) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}

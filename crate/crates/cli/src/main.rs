mod config;
mod jobs;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;

use config::{Cli, Format};
use report::Report;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let job = match config::resolve(Cli::parse()) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let start = Instant::now();
    let outcome = match jobs::run(&job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if jobs::is_usage_error(&e) { EXIT_USAGE } else { EXIT_FAIL });
        }
    };
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let out = job.out.clone();
    let format = job.format;
    let report = Report::new(job, outcome, total_ms);
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    if let Err(e) = emit(out.as_deref(), &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn emit(path: Option<&std::path::Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

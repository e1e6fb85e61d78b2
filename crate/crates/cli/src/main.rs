//! `lanczos-lab`: seeded experiment runs writing `results.csv`, `report.json`
//! and `meta.json`.
//!
//! Exit codes: 0 when every bound check passes, 1 when one fails, 2 for
//! configuration errors, 3 for numerical or I/O failures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;
mod source;
mod studies;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use crate::config::{resolve, Cli, ConfigError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] lanczos_core::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Numerical(e) => e.kind(),
            _ => "io",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let result = studies::run_study(&cfg);
    let elapsed = clock.elapsed();
    let code = match &result {
        Ok(study) if study.passed => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    };
    if let Err(e) = &result {
        eprintln!("error [{}]: {e}", e.kind());
    }
    match output::write_all(&cfg, &result, started, elapsed, code) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error [{}]: {e}", e.kind());
            return ExitCode::from(3);
        }
    }
    if let Ok(study) = &result {
        let verdict = if study.passed {
            "all checks passed"
        } else {
            "a bound check failed"
        };
        println!(
            "{}: {} rows, {verdict}; wrote {}",
            cfg.command,
            study.rows.len(),
            cfg.output_dir.display()
        );
    }
    ExitCode::from(code)
}

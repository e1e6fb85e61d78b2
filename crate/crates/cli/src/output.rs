//! Report files. Only `meta.json` carries timestamps, so `results.csv` and
//! `report.json` depend on the configuration alone.

use std::fs;
use std::io::Write;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::studies::Study;
use crate::RunError;

pub const RESULTS_FILE: &str = "results.csv";
pub const REPORT_FILE: &str = "report.json";
pub const META_FILE: &str = "meta.json";

pub fn write_all(
    cfg: &ExperimentConfig,
    result: &Result<Study, RunError>,
    started: DateTime<Utc>,
    elapsed: Duration,
    exit_code: u8,
) -> Result<(), RunError> {
    fs::create_dir_all(&cfg.output_dir)?;
    let report = match result {
        Ok(study) => {
            write_csv(cfg, study)?;
            json!({
                "command": cfg.command,
                "schema": study.schema,
                "passed": study.passed,
                "rows": study.rows.len(),
                "summary": study.summary,
            })
        }
        Err(e) => json!({
            "command": cfg.command,
            "passed": false,
            "error": { "kind": e.kind(), "message": e.to_string() },
        }),
    };
    fs::write(
        cfg.output_dir.join(REPORT_FILE),
        serde_json::to_string_pretty(&report)? + "\n",
    )?;
    let meta = json!({
        "config": cfg,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "parallel": cfg!(feature = "parallel"),
        "started_at": started.to_rfc3339(),
        "wall_time_seconds": elapsed.as_secs_f64(),
        "exit_code": exit_code,
    });
    fs::write(
        cfg.output_dir.join(META_FILE),
        serde_json::to_string_pretty(&meta)? + "\n",
    )?;
    Ok(())
}

fn write_csv(cfg: &ExperimentConfig, study: &Study) -> Result<(), RunError> {
    let mut file = fs::File::create(cfg.output_dir.join(RESULTS_FILE))?;
    writeln!(file, "# lanczos-lab schema {} seed {}", study.schema, cfg.seed)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(&study.header)?;
    for row in &study.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

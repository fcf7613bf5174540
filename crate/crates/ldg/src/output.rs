//! Report files: `<experiment>.json` and `<experiment>.csv` per experiment.
//! Only the JSON metadata carries a timestamp, so CSV files are
//! byte-reproducible for a fixed configuration.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::LdgError;
use crate::experiments::ExperimentOutput;

#[derive(Serialize)]
struct Metadata<'a> {
    generated_at_unix: u64,
    version: &'static str,
    config: &'a RunConfig,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    metadata: Metadata<'a>,
    #[serde(flatten)]
    report: &'a ldg_core::ExperimentReport,
    passed: bool,
    data: &'a serde_json::Value,
}

fn output_err(path: &Path) -> impl FnOnce(std::io::Error) -> LdgError + '_ {
    move |source| LdgError::Output {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes both files and returns their paths.
pub fn write_outputs(dir: &Path, config: &RunConfig, out: &ExperimentOutput) -> Result<[PathBuf; 2], LdgError> {
    std::fs::create_dir_all(dir).map_err(output_err(dir))?;
    let name = &out.report.experiment;

    let csv_path = dir.join(format!("{name}.csv"));
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record(&out.table.columns)?;
    for row in &out.table.rows {
        w.write_record(row)?;
    }
    w.flush().map_err(output_err(&csv_path))?;

    let json_path = dir.join(format!("{name}.json"));
    let doc = JsonReport {
        metadata: Metadata {
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            version: env!("CARGO_PKG_VERSION"),
            config,
        },
        report: &out.report,
        passed: out.report.passed(),
        data: &out.data,
    };
    let text = serde_json::to_string_pretty(&doc)?;
    std::fs::write(&json_path, text + "\n").map_err(output_err(&json_path))?;
    Ok([json_path, csv_path])
}

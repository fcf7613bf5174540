//! Command-line driver, mesh files and report output for `ldg-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod meshio;
pub mod output;

use std::path::PathBuf;

pub use config::RunConfig;
pub use error::LdgError;

use cli::RunArgs;
use config::{PartialConfig, OUTPUT_ENV};

/// Flags merged over the optional config file and the environment.
pub fn resolve_config(args: &RunArgs) -> Result<RunConfig, LdgError> {
    let flags = args.flags().map_err(LdgError::Config)?;
    let file = match &args.config {
        Some(p) => PartialConfig::read(p)?,
        None => PartialConfig::default(),
    };
    let env = std::env::var_os(OUTPUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    flags.resolve(file, env)
}

/// Outcome of a full run: per-experiment pass flags and written files.
#[derive(Debug)]
pub struct RunSummary {
    pub results: Vec<(String, bool, Vec<String>)>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, ok, _)| *ok)
    }
}

pub fn run(config: &RunConfig) -> Result<RunSummary, LdgError> {
    let outputs = experiments::run_experiments(config)?;
    let mut summary = RunSummary {
        results: Vec::new(),
        files: Vec::new(),
    };
    for out in &outputs {
        summary.files.extend(output::write_outputs(&config.output, config, out)?);
        let failed = out.report.failures().map(|c| c.name.clone()).collect();
        summary
            .results
            .push((out.report.experiment.clone(), out.report.passed(), failed));
    }
    Ok(summary)
}

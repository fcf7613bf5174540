//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ldg_core::BuiltinMesh;

use crate::config::{Experiment, LiftingDegree, PartialConfig, SolverChoice};

#[derive(Debug, Parser)]
#[command(name = "ldg", version, about = "Penalty-free LDG experiments")]
pub struct Cli {
    /// Defaults to `run` with every experiment.
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run experiments and write JSON and CSV reports.
    Run(RunArgs),
    /// Write a built-in mesh in the plain-text mesh format.
    ExportMesh {
        mesh: BuiltinMesh,
        path: PathBuf,
    },
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Experiment to run (same as --experiment).
    #[arg(value_enum)]
    pub target: Option<Experiment>,
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    /// Built-in mesh: two_triangle, criss_cross, fig1_left, fig1_right, unit_square(n).
    #[arg(long, conflicts_with = "mesh_file")]
    pub mesh: Option<BuiltinMesh>,
    /// Mesh file in the plain-text format.
    #[arg(long)]
    pub mesh_file: Option<PathBuf>,
    /// Polynomial degree of the scalar space (1 to 4).
    #[arg(long)]
    pub k: Option<usize>,
    /// `k+1` (default), or `k` for the equal-order comparison.
    #[arg(long)]
    pub lifting_degree: Option<LiftingDegree>,
    /// Number of uniform refinement levels.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Output directory; falls back to LDG_OUTPUT_DIR, then `ldg-output`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Seed for random test functions.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverChoice>,
    /// `key = value` configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    pub fn flags(&self) -> Result<PartialConfig, String> {
        let experiment = match (self.target, self.experiment) {
            (Some(a), Some(b)) if a != b => {
                return Err(format!("conflicting experiments `{}` and `{}`", a.name(), b.name()))
            }
            (a, b) => a.or(b),
        };
        Ok(PartialConfig {
            experiment,
            mesh: self.mesh,
            mesh_file: self.mesh_file.clone(),
            k: self.k,
            lifting_degree: self.lifting_degree,
            levels: self.levels,
            output: self.output.clone(),
            seed: self.seed,
            solver: self.solver,
        })
    }
}

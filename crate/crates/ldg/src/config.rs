//! Run configuration: flat `key = value` files merged with command-line
//! flags. Precedence: flag, then config file, then `LDG_OUTPUT_DIR` (output
//! only), then the built-in default.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use ldg_core::solver::LinearSolver;
use ldg_core::spaces::{MAX_K, MIN_K};
use ldg_core::BuiltinMesh;
use serde::Serialize;

use crate::error::LdgError;

pub const OUTPUT_ENV: &str = "LDG_OUTPUT_DIR";
pub const DEFAULT_OUTPUT: &str = "ldg-output";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_LEVELS: usize = 3;
pub const DEFAULT_MESH: BuiltinMesh = BuiltinMesh::UnitSquare(2);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Counterexample,
    Stability,
    Identities,
    Convergence,
    All,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Counterexample => "counterexample",
            Experiment::Stability => "stability",
            Experiment::Identities => "identities",
            Experiment::Convergence => "convergence",
            Experiment::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Cg,
    Cholesky,
}

impl From<SolverChoice> for LinearSolver {
    fn from(s: SolverChoice) -> Self {
        match s {
            SolverChoice::Cg => LinearSolver::ConjugateGradient,
            SolverChoice::Cholesky => LinearSolver::Cholesky,
        }
    }
}

/// `k`, `k+1`, or an explicit degree checked against `k` at validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LiftingDegree {
    Equal,
    Raised,
    Explicit(usize),
}

impl FromStr for LiftingDegree {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace(' ', "").as_str() {
            "k" => Ok(LiftingDegree::Equal),
            "k+1" => Ok(LiftingDegree::Raised),
            other => other
                .parse()
                .map(LiftingDegree::Explicit)
                .map_err(|_| format!("lifting degree must be `k`, `k+1` or an integer, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshSource {
    Builtin(#[serde(serialize_with = "serialize_display")] BuiltinMesh),
    File(PathBuf),
}

fn serialize_display<S: serde::Serializer>(mesh: &BuiltinMesh, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(mesh)
}

impl MeshSource {
    pub fn label(&self) -> String {
        match self {
            MeshSource::Builtin(m) => m.to_string(),
            MeshSource::File(p) => p.display().to_string(),
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub mesh: MeshSource,
    pub k: usize,
    pub ell: usize,
    pub levels: usize,
    pub output: PathBuf,
    pub seed: u64,
    pub solver: SolverChoice,
}

impl RunConfig {
    /// Stability experiments also report the raised lifting when the
    /// equal-order one is selected.
    pub fn comparison_mode(&self) -> bool {
        self.ell == self.k
    }
}

/// Unvalidated values from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub experiment: Option<Experiment>,
    pub mesh: Option<BuiltinMesh>,
    pub mesh_file: Option<PathBuf>,
    pub k: Option<usize>,
    pub lifting_degree: Option<LiftingDegree>,
    pub levels: Option<usize>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub solver: Option<SolverChoice>,
}

fn invalid(msg: impl Into<String>) -> LdgError {
    LdgError::Config(msg.into())
}

fn parse_value<T: FromStr>(key: &str, v: &str, line: usize) -> Result<T, LdgError> {
    v.parse()
        .map_err(|_| invalid(format!("line {line}: invalid value `{v}` for `{key}`")))
}

impl PartialConfig {
    /// Parses `key = value` lines; `#` starts a comment line, keys accept
    /// `-` or `_`.
    pub fn parse(text: &str) -> Result<Self, LdgError> {
        let mut c = PartialConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (key, value) = l
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {line}: expected `key = value`, found `{l}`")))?;
            let key = key.trim().replace('-', "_");
            let v = value.trim();
            match key.as_str() {
                "experiment" => {
                    c.experiment = Some(
                        Experiment::from_str(v, true)
                            .map_err(|_| invalid(format!("line {line}: unknown experiment `{v}`")))?,
                    )
                }
                "mesh" => c.mesh = Some(v.parse().map_err(|e: ldg_core::Error| invalid(format!("line {line}: {e}")))?),
                "mesh_file" => c.mesh_file = Some(PathBuf::from(v)),
                "k" => c.k = Some(parse_value(&key, v, line)?),
                "lifting_degree" => {
                    c.lifting_degree = Some(v.parse().map_err(|e: String| invalid(format!("line {line}: {e}")))?)
                }
                "levels" => c.levels = Some(parse_value(&key, v, line)?),
                "output" => c.output = Some(PathBuf::from(v)),
                "seed" => c.seed = Some(parse_value(&key, v, line)?),
                "solver" => {
                    c.solver = Some(
                        SolverChoice::from_str(v, true)
                            .map_err(|_| invalid(format!("line {line}: unknown solver `{v}`")))?,
                    )
                }
                other => return Err(invalid(format!("line {line}: unknown key `{other}`"))),
            }
        }
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self, LdgError> {
        let text = std::fs::read_to_string(path).map_err(|e| LdgError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::parse(&text)
    }

    fn mesh_source(&self, origin: &str) -> Result<Option<MeshSource>, LdgError> {
        match (&self.mesh, &self.mesh_file) {
            (Some(_), Some(_)) => Err(invalid(format!("{origin}: `mesh` and `mesh_file` are mutually exclusive"))),
            (Some(m), None) => Ok(Some(MeshSource::Builtin(*m))),
            (None, Some(p)) => Ok(Some(MeshSource::File(p.clone()))),
            (None, None) => Ok(None),
        }
    }

    /// Merges `self` (flags) over `file`, applies defaults and validates.
    pub fn resolve(self, file: PartialConfig, env_output: Option<PathBuf>) -> Result<RunConfig, LdgError> {
        let mesh = match self.mesh_source("flags")? {
            Some(m) => m,
            None => file.mesh_source("config file")?.unwrap_or(MeshSource::Builtin(DEFAULT_MESH)),
        };
        let k = self.k.or(file.k).unwrap_or(MIN_K);
        if !(MIN_K..=MAX_K).contains(&k) {
            return Err(invalid(format!("k must be in {MIN_K}..={MAX_K}, got {k}")));
        }
        let ell = match self.lifting_degree.or(file.lifting_degree).unwrap_or(LiftingDegree::Raised) {
            LiftingDegree::Equal => k,
            LiftingDegree::Raised => k + 1,
            LiftingDegree::Explicit(l) if l == k || l == k + 1 => l,
            LiftingDegree::Explicit(l) => {
                return Err(invalid(format!("lifting degree must be k = {k} or k+1 = {}, got {l}", k + 1)))
            }
        };
        let levels = self.levels.or(file.levels).unwrap_or(DEFAULT_LEVELS);
        if levels == 0 {
            return Err(invalid("levels must be at least 1"));
        }
        Ok(RunConfig {
            experiment: self.experiment.or(file.experiment).unwrap_or(Experiment::All),
            mesh,
            k,
            ell,
            levels,
            output: self
                .output
                .or(file.output)
                .or(env_output)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)),
            seed: self.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            solver: self.solver.or(file.solver).unwrap_or(SolverChoice::Cg),
        })
    }
}

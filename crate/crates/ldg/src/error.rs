use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LdgError {
    #[error("{0}")]
    Core(#[from] ldg_core::Error),
    #[error("mesh file line {line}: {message}")]
    MeshFormat { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl LdgError {
    /// Errors caused by the input rather than by a computation.
    pub fn is_invalid_input(&self) -> bool {
        use ldg_core::Error as E;
        match self {
            LdgError::MeshFormat { .. } | LdgError::Config(_) => true,
            LdgError::Io { .. } => true,
            LdgError::Core(e) => matches!(
                e,
                E::EmptyMesh
                    | E::VertexOutOfRange { .. }
                    | E::DegenerateCell(_)
                    | E::DuplicateCell(..)
                    | E::NonConforming(_)
                    | E::UnknownMesh(_)
                    | E::NotFaceRegular
                    | E::UnsupportedDegree(_)
                    | E::UnsupportedLiftingDegree { .. }
                    | E::TooFewLevels(_)
            ),
            LdgError::Output { .. } | LdgError::Csv(_) | LdgError::Json(_) => false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.is_invalid_input() {
            2
        } else {
            1
        }
    }
}

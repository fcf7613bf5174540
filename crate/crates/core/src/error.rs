use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("mesh has no cells")]
    EmptyMesh,
    #[error("cell {cell} references vertex {index}, but the mesh has {vertex_count} vertices")]
    VertexOutOfRange {
        cell: usize,
        index: usize,
        vertex_count: usize,
    },
    #[error("cell {0} has zero area")]
    DegenerateCell(usize),
    #[error("cell {0} duplicates cell {1}")]
    DuplicateCell(usize, usize),
    #[error("non-conforming geometry: {0}")]
    NonConforming(String),
    #[error("unknown mesh name `{0}`")]
    UnknownMesh(String),
    #[error("mesh not face regular")]
    NotFaceRegular,
    #[error("unsupported quadrature degree {0} (max 20)")]
    UnsupportedQuadrature(usize),
    #[error("polynomial degree k = {0} outside the supported range 1..=4")]
    UnsupportedDegree(usize),
    #[error("lifting degree {ell} must be k = {k} or k + 1")]
    UnsupportedLiftingDegree { k: usize, ell: usize },
    #[error("face {0} is a boundary face and has no interior side")]
    NoInteriorSide(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("moment matrix of cell {0} is singular")]
    SingularMomentSystem(usize),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("convergence study needs at least 3 levels, got {0}")]
    TooFewLevels(usize),
}

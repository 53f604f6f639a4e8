use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures of the numerical layer. Variants that encode a violated
/// hypothesis carry a message naming it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("grid needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("non-finite sample at node {index}")]
    NonFinite { index: usize },
    #[error("stencil needs at least {min} nodes, got {got}")]
    StencilTooSmall { min: usize, got: usize },
    #[error("grid functions live on different grids")]
    GridMismatch,
    #[error("value {z} lies outside the image [{lo}, {hi}]")]
    OutOfRange { z: f64, lo: f64, hi: f64 },
    #[error("monotonicity violated: {0}")]
    MonotonicityViolation(String),
    #[error("degenerate intersection: {0}")]
    DegenerateIntersection(String),
    #[error("image mismatch: {0}")]
    ImageMismatch(String),
    #[error("singular tridiagonal system at row {row}")]
    SingularSystem { row: usize },
    #[error("shift mismatch: a0(g1) = {a_end} but shift_c = {shift_c}")]
    ShiftMismatch { a_end: f64, shift_c: f64 },
    #[error("mesh condition violated: {0}")]
    MeshConditionViolated(String),
    #[error("grid too coarse for the mesh: {nodes_per_cell:.2} grid nodes per cell, need at least 5")]
    GridTooCoarse { nodes_per_cell: f64 },
    #[error("rate fit needs at least 3 positive pairs, got {0}")]
    InsufficientData(usize),
    #[error("noise budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

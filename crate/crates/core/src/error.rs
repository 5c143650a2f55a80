use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("edge {{{u}, {v}}} has non-positive weight {weight}")]
    NonPositiveWeight { u: usize, v: usize, weight: String },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("predicted top-level face count {predicted} exceeds the cap of {cap}")]
    SizeCap { predicted: u128, cap: u128 },

    #[error("face {0} is not in the complex")]
    FaceNotInComplex(String),

    #[error("level {level} out of range [{min}, {max}]")]
    LevelOutOfRange { level: isize, min: isize, max: isize },

    #[error("construction Q requires unit edge weights unless the weighted extension is enabled")]
    NonUnitWeights,

    #[error("malformed complex document: {0}")]
    MalformedComplex(String),

    #[error("eigensolver did not converge on a {size}x{size} matrix (iteration limit {iterations}, 0 = unbounded)")]
    EigenNonConvergence { size: usize, iterations: usize },

    #[error("matrix of size {size} exceeds the eigensolve cap of {cap}")]
    EigenCap { size: usize, cap: usize },

    #[error("operator is not reversible: {0}")]
    NotReversible(String),

    #[error("symmetrization residual {residual:e} exceeds {tolerance:e}")]
    SymmetrizationResidual { residual: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

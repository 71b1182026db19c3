use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a sphere point needs at least 2 coordinates, found {0}")]
    TooFewCoordinates(usize),

    #[error("vector norm {norm} is not within tolerance of 1")]
    NotUnit { norm: f64 },

    #[error("coordinates must be finite")]
    NonFinite,

    #[error("point set is not short (max-min margin {margin})")]
    NotShort { margin: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("degenerate simplex (normalized determinant {det})")]
    Degenerate { det: f64 },

    #[error("origin is not interior to the simplex (min barycentric coordinate {min_coord})")]
    OriginNotInterior { min_coord: f64 },

    #[error("wrong number of elements: expected {expected}, found {found}")]
    WrongCount { expected: String, found: usize },

    #[error("rank-deficient linear system")]
    Singular,

    #[error("cap has {found} generators, above the face-enumeration limit {limit}")]
    FaceEnumerationLimit { found: usize, limit: usize },

    #[error("feasibility solver hit its iteration limit")]
    IterationLimit,

    #[error("perturbation retry limit exceeded")]
    RetryLimit,

    #[error("part selection count {count} exceeds the limit {limit}")]
    SelectionExplosion { count: f64, limit: f64 },

    #[error("cap is not simplicial: {0}")]
    NonSimplicial(&'static str),

    #[error("labeling violates the boundary condition at vertex {vertex:?} (label {label})")]
    BoundaryCondition { vertex: Vec<f64>, label: usize },

    #[error("rejection limit reached after {0} attempts")]
    RejectionLimit(usize),

    #[error("invalid arc: {0}")]
    InvalidArc(String),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

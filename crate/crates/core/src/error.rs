use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrtError {
    #[error("dimension mismatch at index {index}: expected {expected}, found {found}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("coefficient count {found} does not match product of dims {expected}")]
    CoeffCount { expected: usize, found: usize },

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),

    #[error("zero trace: the tensor is degenerate")]
    DegenerateTensor,

    #[error("graph has {vertices} vertices but tensor has order {order}")]
    OrderMismatch { vertices: usize, order: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{0:?} is not a clique or hyperedge of the constraint structure")]
    NotAClique(Vec<usize>),

    #[error("tensor order {order} exceeds exhaustive enumeration limit {limit}")]
    OrderTooLarge { order: usize, limit: usize },

    #[error("symmetry group order exceeds {0}")]
    GroupTooLarge(usize),

    #[error("invalid symmetry generator: {0}")]
    InvalidGenerator(String),

    #[error("no value supplied for orbit representative {0:?}")]
    MissingRepresentative(Vec<usize>),

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("leg {0} is not a qubit leg")]
    NonQubitLeg(usize),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("gate is not dual-unitary (deviation {0:e})")]
    NotDualUnitary(f64),

    #[error("wiring inconsistency: {0}")]
    Wiring(String),

    #[error("probe is not traceless (|trace| = {0:e})")]
    ProbeNotTraceless(f64),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("network has {tiles} tiles, above the brute-force budget of {budget}")]
    BudgetExceeded { tiles: usize, budget: usize },

    #[error("unsupported tiling {{{p},{q}}}")]
    UnsupportedTiling { p: usize, q: usize },

    #[error("eigendecomposition did not converge")]
    Eigen,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GrtError>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("invalid rational literal `{0}`")]
    Rational(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) has an endpoint outside 1..={2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("vector family is empty")]
    EmptyFamily,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector{}", .0.map(|v| format!(" at vertex {v}")).unwrap_or_default())]
    ZeroVector(Option<usize>),
    #[error("realization has {vectors} vectors but the graph has {vertices} vertices")]
    IndexMismatch { vectors: usize, vertices: usize },

    #[error("graph with {cliques} maximal cliques exceeds the exact LP limit of {limit}")]
    TooLarge { cliques: usize, limit: usize },
    #[error("graph with {n} vertices exceeds the {what} limit of {limit}")]
    TooManyVertices { what: &'static str, n: usize, limit: usize },
    #[error("SDP solver did not converge in {iterations} iterations (gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("OAM value {0} leaves the register")]
    OamOverflow(i32),
    #[error("no light in the {0} port")]
    EmptyPort(&'static str),
    #[error("residual OAM-0 weight {0:e} after preparation")]
    IncompleteTransfer(f64),
    #[error("transferrer input has weight {0:e} outside its expected OAM subspace")]
    TransferInput(f64),
    #[error("invalid optical element: {0}")]
    InvalidElement(String),
    #[error("target state cannot be prepared by the available setups: {0}")]
    UnsupportedTarget(String),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("invalid certification input: {0}")]
    InvalidCertification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

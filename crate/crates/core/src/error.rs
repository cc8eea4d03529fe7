use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("exact division left a nonzero remainder")]
    Remainder,
    #[error("order must be at least {min}, got {got}")]
    BadOrder { min: i64, got: i64 },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("symmetry does not preserve the graph: {0}")]
    NotAutomorphism(String),
    #[error("graph must be undirected")]
    Directed,
    #[error("graph is not a unit-square grid subgraph: {0}")]
    NotGrid(String),
    #[error("axis split rejected: {0}")]
    BadSplit(String),
    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("rounding certificate failed after {bits} bits: {detail}")]
    Certificate { bits: usize, detail: String },
    #[error("no closed form is known for {0}; count invariant trees directly at small order")]
    NoClosedForm(String),
    #[error("vertex {0} is not on the outer face")]
    NotOnOuterFace(usize),
    #[error("{0} is not in the encoded table")]
    NotEncoded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

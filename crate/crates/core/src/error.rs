use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("scope mismatch: {0}")]
    ScopeMismatch(String),

    #[error("invalid game spec: {0}")]
    InvalidSpec(String),

    #[error("invalid treeplex: {0}")]
    InvalidTreeplex(String),

    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },

    #[error("unsupported efg-seq version {0}")]
    UnsupportedVersion(u32),

    #[error("line {line}: index out of range: {message}")]
    IndexOutOfRange { line: usize, message: String },

    #[error("line {line}: infoset `{infoset}` listed before the infoset owning its parent sequence")]
    NonTopologicalOrder { line: usize, infoset: String },

    #[error("call protocol violated: {0}")]
    Protocol(&'static str),

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("gap requested for zero iterations")]
    ZeroIterations,

    #[error("brute-force enumeration needs {count} vertices, above the cap of {cap}")]
    VertexCap { count: u128, cap: u128 },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

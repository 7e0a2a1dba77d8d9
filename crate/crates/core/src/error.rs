use thiserror::Error;

/// Errors surfaced by complex construction, operator builders and the bound checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HdxError {
    #[error("vertex {vertex} out of range for a complex on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} repeated within a cell")]
    RepeatedVertex(usize),
    #[error("empty facet")]
    EmptyFacet,
    #[error("cell {0:?} is not in the complex")]
    CellNotFound(Vec<usize>),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(isize, isize),
    #[error("dimension {j} out of range for {what} (top dimension {d})")]
    DimensionOutOfRange { j: isize, d: isize, what: &'static str },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("nontrivial spectrum at dimension {0} is empty")]
    EmptyNontrivialSpectrum(isize),
    #[error("k must be positive, got {0}")]
    NonPositiveK(f64),
    #[error("vertex sets {0} and {1} overlap")]
    OverlappingSets(usize, usize),
    #[error("not an expander at j={j}: eps={eps}")]
    NotAnExpander { j: isize, eps: f64 },
    #[error("missing certificate for j={0}")]
    MissingCertificate(isize),
    #[error("operator count {0} is not an integer (sign or operator bug)")]
    NonIntegerCount(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sum of eps is zero: bound is unbounded by this method")]
    ZeroEpsilonSum,
    #[error("{n} vertices exceeds the exhaustive-search guard of {guard}")]
    TooManyVertices { n: usize, guard: usize },
    #[error("complex has no top-dimensional cells")]
    NoTopCells,
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for HdxError {
    fn from(e: std::io::Error) -> Self {
        HdxError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for HdxError {
    fn from(e: serde_json::Error) -> Self {
        HdxError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HdxError>;

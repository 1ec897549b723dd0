use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("group parameter N must be at least 2, got {0}")]
    InvalidN(usize),

    #[error("matrix is not hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is numerically singular")]
    Singular,

    #[error("basis does not span the hermitian matrices (Gram matrix is singular)")]
    NotSpanning,

    #[error("trace pattern violated: {0}")]
    TracePattern(String),

    #[error("coefficient extraction left a non-real residue of {0:.3e}")]
    NonRealResidue(f64),

    #[error("length mismatch: expected {expected}, got {got} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("result has an imaginary residue of {0:.3e}")]
    ImaginaryResidue(f64),

    #[error("the {0} block has an empty solution space")]
    EmptySolutionSpace(&'static str),

    #[error("momentum matrices do not commute (max |[P,P]| = {0:.3e})")]
    NonCommuting(f64),

    #[error("representation mismatch: {0}")]
    RepMismatch(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the domain [-1, 1] of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("index error: |m| = {m} exceeds l = {l}")]
    Index { l: i64, m: i64 },

    #[error("invalid half-integer {0:?}")]
    HalfInt(String),

    #[error("invalid scale parameter: {0}")]
    InvalidScale(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("antipodal displacements: |1 - conj(g1) g2| = {0:e} is below 1e-12")]
    Antipodal(f64),

    #[error("point at the south pole has no stereographic image")]
    SouthPole,

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("density operator trace {0} differs from 1")]
    NonNormalized(f64),

    #[error("Fock cutoff {cutoff} too small for amplitude {amplitude} (tail weight {tail:e})")]
    InsufficientCutoff {
        cutoff: usize,
        amplitude: f64,
        tail: f64,
    },

    #[error("invalid tolerance {0}: must lie in (0, 1e-3]")]
    InvalidTolerance(f64),

    #[error("invalid fit input: {0}")]
    InvalidFit(String),

    #[error("no zero crossing found along {0}: field has no chessboard pattern")]
    NoChessboard(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

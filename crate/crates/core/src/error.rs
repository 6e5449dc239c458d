use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("vector is not in the subspace")]
    NotInSubspace,
    #[error("first space is not contained in the second")]
    NotASubspace,
    #[error("Jacobi identity fails: {}", violations.join("; "))]
    JacobiViolation { violations: Vec<String> },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("J^2 != -1")]
    NotAnAcs,
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("coframe does not define an almost complex structure (real parts are dependent)")]
    DegenerateCoframe,
    #[error("form is not of pure type ({0})")]
    NotPureType(String),
    #[error("2-form is degenerate")]
    Degenerate,
    #[error("J is not calibrated by the symplectic form")]
    NotCalibrated,
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("L does not anticommute with J0")]
    NonAnticommuting,
    #[error("matrix is not symmetric: {0}")]
    NonSymmetric(String),
    #[error("2-form is not J-anti-invariant")]
    NotAntiInvariant,
    #[error("J is not integrable")]
    NotIntegrable,
    #[error("volume normalisation needs a square root of {0}")]
    IrrationalVolume(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: String, name: String },
    #[error("dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

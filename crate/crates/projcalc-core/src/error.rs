//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operation requires a square matrix.
    NotSquare { rows: usize, cols: usize },
    /// Matrix entries must be finite.
    NonFinite,
    /// Shape mismatch in matrix arithmetic.
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Input failed the Hermitian symmetry check.
    NotHermitian { residual: f64 },
    /// The eigenvalue iteration did not converge.
    NoConvergence { sweeps: usize },
    /// A matrix failed projection or symmetry validation.
    ValidationFailed { what: &'static str, residual: f64 },
    /// Interior eigenvalues of `P − Q` could not be matched into `±λ`
    /// pairs; the input is not a pair of orthogonal projections.
    PairingFailure { unpaired: f64 },
    /// An eigenvalue near the corner cutoff resisted classification.
    DegenerateAngle { value: f64 },
    /// Decomposition data does not describe a space of consistent size.
    InconsistentDims { reason: String },
    /// Words over differently sized generator sets cannot be combined.
    MismatchedArity { left: usize, right: usize },
    /// A representation spec violates its invariants.
    InvalidSpec { reason: String },
    /// A textual word failed to parse or exceeded the length cap.
    InvalidWord { reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix is not square ({rows}x{cols})")
            }
            Error::NonFinite => write!(f, "matrix entries must be finite"),
            Error::DimensionMismatch { left, right } => write!(
                f,
                "dimension mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::NotHermitian { residual } => {
                write!(f, "matrix is not Hermitian (residual {residual:.3e})")
            }
            Error::NoConvergence { sweeps } => {
                write!(f, "eigenvalue iteration stalled after {sweeps} sweeps")
            }
            Error::ValidationFailed { what, residual } => {
                write!(f, "validation failed: {what} (residual {residual:.3e})")
            }
            Error::PairingFailure { unpaired } => write!(
                f,
                "eigenvalue {unpaired:.6} has no matching partner of opposite sign"
            ),
            Error::DegenerateAngle { value } => {
                write!(f, "eigenvalue {value:.6} resists corner classification")
            }
            Error::InconsistentDims { reason } => {
                write!(f, "inconsistent dimensions: {reason}")
            }
            Error::MismatchedArity { left, right } => {
                write!(f, "mismatched arity: {left} vs {right}")
            }
            Error::InvalidSpec { reason } => write!(f, "invalid representation spec: {reason}"),
            Error::InvalidWord { reason } => write!(f, "invalid word: {reason}"),
        }
    }
}

impl core::error::Error for Error {}

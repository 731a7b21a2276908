use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands were created under different field contexts.
    ContextMismatch,
    /// Inversion of the zero element.
    DivisionByZero,
    /// Scaling a subspace by zero.
    InvalidScalar,
    /// Base field order is not a supported prime.
    InvalidCharacteristic(u32),
    /// Extension degree is outside `1..=MAX_DEGREE`.
    InvalidDegree(usize),
    /// Modulus is not monic of the right degree, or has out-of-range coefficients.
    InvalidModulus,
    /// Modulus factors over the base field.
    ReducibleModulus,
    /// A coordinate vector had the wrong length or an out-of-range entry.
    InvalidCoordinates,
    /// Enumerating a set would exceed the configured budget.
    EnumerationTooLarge { required: u128, budget: u64 },
    /// Operand shapes do not fit together.
    ShapeMismatch,
    /// Parameters violate an operation's preconditions.
    InvalidParameters(&'static str),
    /// Randomised construction did not succeed within its resampling budget.
    ConstructionFailed,
    /// A parity check matrix with a zero row or row weight above one.
    NotNormalizable,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ContextMismatch => f.write_str("operands belong to different field contexts"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::InvalidScalar => f.write_str("scalar must be nonzero"),
            Error::InvalidCharacteristic(q) => write!(f, "unsupported base field order {q}"),
            Error::InvalidDegree(m) => write!(f, "unsupported extension degree {m}"),
            Error::InvalidModulus => f.write_str("modulus must be monic of degree m"),
            Error::ReducibleModulus => f.write_str("modulus is reducible"),
            Error::InvalidCoordinates => f.write_str("invalid coordinate vector"),
            Error::EnumerationTooLarge { required, budget } => {
                write!(f, "enumeration of {required} elements exceeds budget {budget}")
            }
            Error::ShapeMismatch => f.write_str("shape mismatch"),
            Error::InvalidParameters(why) => write!(f, "invalid parameters: {why}"),
            Error::ConstructionFailed => f.write_str("construction failed within resample budget"),
            Error::NotNormalizable => f.write_str("matrix is not normalizable to weight one"),
        }
    }
}

impl core::error::Error for Error {}

use alloc::string::String;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Caller passed parameters outside the documented range.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Parameters are well-formed but the mathematical object does not exist
    /// (nonpositive support values, unbounded polytopes, non-C^{2,+} data).
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine failed to produce a usable value.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// A finite basis yielded a singular Gram or moment matrix.
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
    /// The requested combination of dimension/representation is not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}

macro_rules! ensure {
    ($cond:expr, $kind:ident, $($arg:tt)*) => {
        if !($cond) {
            $crate::error::bail!($kind, $($arg)*);
        }
    };
}

pub(crate) use bail;
pub(crate) use ensure;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid hex digit {found:?} at position {position}")]
    HexDigit { position: usize, found: char },

    #[error("hex string has odd length {0}")]
    HexOddLength(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The requested transform needs more evaluation points than the field has.
    #[error("field GF(2^{width}) is too small for m = {m}; build a larger tower")]
    FieldTooSmall { m: u32, width: u32 },

    #[error("element {0:#x} does not belong to this field")]
    ForeignElement(u64),

    /// `x^2 + x = c` has no solution because `c` has trace 1.
    #[error("x^2 + x = {0:#x} is unsolvable (trace is 1)")]
    Unsolvable(u64),

    /// Reading or writing a file or stream failed.
    #[error("I/O error: {0}")]
    Io(String),

    /// A construction step that theory guarantees has failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

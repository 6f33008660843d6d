use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix dimension below the supported minimum.
    TooSmall { n: usize, min: usize },
    /// A row whose length differs from the number of rows.
    NotSquare { row: usize, len: usize, n: usize },
    /// Entry that is NaN or infinite (0-based position).
    NonFinite { row: usize, col: usize },
    /// 1-based index outside `1..=n`.
    IndexOutOfRange { index: usize, n: usize },
    /// The variance of `S_n` vanishes, so standardization is undefined.
    DegenerateVariance,
    /// Exponential-cost routine requested above its configured cap.
    OverCap { what: &'static str, n: usize, cap: usize },
    /// Empty input where at least one element is needed.
    Empty(&'static str),
    /// Parameter outside its domain; `reason` names the violated condition.
    InvalidParameter { name: &'static str, reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TooSmall { n, min } => write!(f, "matrix dimension {n} is below the minimum {min}"),
            Error::NotSquare { row, len, n } => {
                write!(f, "row {} has {len} entries, expected {n}", row + 1)
            }
            Error::NonFinite { row, col } => {
                write!(f, "entry ({}, {}) is not finite", row + 1, col + 1)
            }
            Error::IndexOutOfRange { index, n } => write!(f, "index {index} is outside 1..={n}"),
            Error::DegenerateVariance => {
                write!(f, "degenerate matrix: the variance of the statistic is zero")
            }
            Error::OverCap { what, n, cap } => {
                write!(f, "{what} for n = {n} exceeds the cap {cap}; raise the cap or use the Monte Carlo estimate")
            }
            Error::Empty(what) => write!(f, "{what} is empty"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}

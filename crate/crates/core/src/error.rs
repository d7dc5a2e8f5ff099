use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension {rows}x{cols} is not supported here")]
    DimensionUnsupported { rows: usize, cols: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace} instead of 1")]
    TraceNotUnit { trace: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("state is not normalized (norm squared {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("parameter {name} = {value} is outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("Kraus operators are incomplete (deviation from identity {deviation:.3e})")]
    ChannelIncomplete { deviation: f64 },

    #[error("index {index} out of range for count {count}")]
    IndexOutOfRange { index: u64, count: u64 },

    #[error(
        "(concurrence {concurrence}, purity {purity}) is not realizable by a Werner-unitary state"
    )]
    NotRealizable { concurrence: f64, purity: f64 },

    #[error("malformed state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Check that `value` lies in the closed interval `[lo, hi]`.
pub(crate) fn check_closed(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value, range })
    }
}

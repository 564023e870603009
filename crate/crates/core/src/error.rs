use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A prime-table query went past the sieve limit.
    #[error("prime table too small; need a sieve bound of at least {required}")]
    NeedsLargerSieve { required: u64 },

    #[error("division by an enclosure containing zero")]
    IndeterminateDivision,

    #[error("exponent must exceed 1 (got lower endpoint {0})")]
    DivergentInput(String),

    /// Two enclosures still overlap at the maximum precision; usually means
    /// the exponent sits on (or extremely close to) a threshold r_p.
    #[error("undecided comparison near a threshold: {context}")]
    ThresholdProximity { prime: Option<u64>, context: String },

    #[error("bisection bracket failure: {0}")]
    BracketFailure(String),

    #[error("sign of the balancing function is undecided on [{lo}, {hi}]")]
    UndecidedSign { lo: String, hi: String },

    #[error("mighty-prime enumeration is not certified complete (scanned to {scan_bound})")]
    IncompleteEnumeration { scan_bound: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("assertion failed: {0}")]
    AssertionFailure(String),
}

impl Error {
    pub(crate) fn proximity(prime: Option<u64>, context: impl Into<String>) -> Self {
        Error::ThresholdProximity {
            prime,
            context: context.into(),
        }
    }
}

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Structurally invalid input (shape mismatch, non-homomorphism, bad JSON value, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A map does not respect the relation lattice of its source.
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),

    /// A complex or chain map violated d∘d = 0 or commutation with differentials.
    #[error("not a complex: {0}")]
    NotAComplex(String),

    /// Enumeration was requested on a group with positive free rank.
    #[error("infinite group")]
    InfiniteGroup,

    /// A brute-force enumeration would exceed its configured budget.
    #[error("bound exceeded for {what}: estimated {estimate}, bound {bound}")]
    BoundExceeded {
        what: String,
        estimate: String,
        bound: String,
    },

    /// The requested computation is outside what the model supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn bound(
        what: impl Into<String>,
        estimate: impl ToString,
        bound: impl ToString,
    ) -> Self {
        Error::BoundExceeded {
            what: what.into(),
            estimate: estimate.to_string(),
            bound: bound.to_string(),
        }
    }
}

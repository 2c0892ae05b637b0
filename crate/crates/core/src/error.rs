use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph order {order} exceeds the maximum of {max}")]
    OrderOverflow { order: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),

    #[error("graph is not regular of degree {0}")]
    NotRegular(usize),

    #[error("pair (s, t) = ({s}, {t}) is not admissible")]
    NotAdmissible { s: usize, t: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("outside the hypothesis range: {0}")]
    HypothesisRange(String),
}

impl Error {
    /// True when the error stems from malformed user input rather than a
    /// refused computation.
    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::MalformedGraph6(_))
    }
}

use thiserror::Error;

/// Errors raised by the model, the algorithms and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown link id {0}")]
    UnknownLink(usize),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    /// `P_v <= beta * N * l_v^alpha`: the link fails SINR even when alone.
    #[error("link {link} is too weak to overcome ambient noise")]
    WeakLink { link: usize },

    #[error("links {from} and {to} are at distance zero")]
    DegenerateDistance { from: usize, to: usize },

    #[error("link {link} has affectance {affectance} above the {bound} budget of the claimed signal set")]
    NotSignalSet {
        link: usize,
        affectance: f64,
        bound: f64,
    },

    #[error("signal strengthening produced {groups} groups, above the bound {bound}")]
    StrengtheningBound { groups: usize, bound: usize },

    #[error("Perron iteration inconclusive after {iterations} iterations")]
    OracleInconclusive { iterations: usize },

    #[error("instance has {n} candidate links, above the oracle cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("scheduler made no progress on residual {residual:?}")]
    Stuck { residual: Vec<usize> },

    #[error("fixture generation failed: {0}")]
    FixtureFailure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

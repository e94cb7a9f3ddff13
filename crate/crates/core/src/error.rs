use thiserror::Error;

/// Errors raised by the library. Every variant maps to the CLI's usage/domain
/// exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZeroInterval { lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate parameters: k(k+2) = 0 for k = {k}")]
    DegenerateParams { k: f64 },

    #[error("loss of significance: {0}")]
    NumericalLossOfSignificance(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no endpoint guard applies: {0}")]
    GuardUnavailable(String),

    #[error("parameters outside the statement's range: {0}")]
    ParamsOutOfStatementRange(String),

    #[error("bracket does not straddle the boundary: {0}")]
    Bracket(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input was read but broke an accounting invariant.
    Validation,
    /// A metric, attribution or scenario step could not be computed.
    Computation,
    /// The input document could not be parsed.
    Parse,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field}: {reason}")]
    InvalidQuantity { field: String, reason: String },

    #[error("{metric} is undefined: {denominator} is zero")]
    UndefinedDenominator {
        metric: &'static str,
        denominator: &'static str,
    },

    #[error("{what} must be within [0, 1], got {value}")]
    FractionOutOfRange { what: String, value: f64 },

    #[error("account fails validation: {0}")]
    InvalidAccount(String),

    #[error("economy fails validation: {0}")]
    InvalidEconomy(String),

    #[error("flows and stock additions over-attribute GDP by {excess:.4} T$/yr")]
    OverAttribution { excess: f64 },

    #[error(
        "net fixed capital formation is negative ({nfcf:.4}); stock depletion cannot be attributed"
    )]
    NetStockDepletion { nfcf: f64 },

    #[error("annually recoverable input is negative ({value:.4} Gt/yr): net stock additions exceed structural input")]
    NegativeRecoverable { value: f64 },

    #[error("recovery needs {needed:.4} Gt/yr from waste but only {available:.4} Gt/yr is left")]
    InsufficientWaste { needed: f64, available: f64 },

    #[error("material intensity is undefined for zero spend")]
    ZeroSpend,

    #[error("scenario `{scenario}` step {step}: {source}")]
    ScenarioStep {
        scenario: String,
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("scenario `{scenario}`: {source}")]
    ScenarioResult {
        scenario: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{}", format_parse(.line, .field, .message))]
    Parse {
        line: Option<usize>,
        field: Option<String>,
        message: String,
    },
}

fn format_parse(line: &Option<usize>, field: &Option<String>, message: &str) -> String {
    match (line, field) {
        (Some(l), Some(f)) => format!("line {l}, field `{f}`: {message}"),
        (Some(l), None) => format!("line {l}: {message}"),
        (None, Some(f)) => format!("field `{f}`: {message}"),
        (None, None) => message.to_string(),
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidAccount(_) | Error::InvalidEconomy(_) => ErrorKind::Validation,
            Error::Parse { .. } | Error::InvalidQuantity { .. } => ErrorKind::Parse,
            Error::ScenarioStep { source, .. } | Error::ScenarioResult { source, .. } => {
                match source.kind() {
                    ErrorKind::Parse => ErrorKind::Parse,
                    _ => ErrorKind::Computation,
                }
            }
            _ => ErrorKind::Computation,
        }
    }
}

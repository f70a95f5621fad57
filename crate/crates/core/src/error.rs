use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single rejected configuration field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn join_fields(errors: &[FieldError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {}", join_fields(.0))]
    Config(Vec<FieldError>),

    /// `p_sd + (1 - p_sd) p_sr = 0`: the source never gets a packet out.
    #[error("degenerate channel: {0}")]
    DegenerateChannel(&'static str),

    /// A region whose defining coefficients divide by zero.
    #[error("degenerate region: {0}")]
    DegenerateRegion(&'static str),

    #[error("hypothetical system is unstable: active-slot fraction {0} exceeds 1")]
    UnstableOccupancy(f64),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    #[error("run failed the stability screen: {0}")]
    UnstableRun(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config(vec![FieldError::new(field, message)])
    }
}

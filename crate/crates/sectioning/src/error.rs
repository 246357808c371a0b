use thiserror::Error;

use crate::instance::Violation;

fn list(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Errors produced by parsing, model building and the solver stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown {what} `{id}`")]
    Reference { what: &'static str, id: String },
    #[error("invalid instance: {}", list(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("invalid sectioning: {}", list(.0))]
    InvalidSectioning(Vec<Violation>),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("course `{0}` ran out of open sections")]
    CourseFull(String),
    #[error("enumeration would visit {product} assignments, over the limit of {limit}")]
    LimitExceeded { product: u128, limit: u64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("assignment does not cover variable `{0}`")]
    MissingVariable(String),
    #[error("timetable violates `{rule}` for section `{section}`")]
    Structural { rule: &'static str, section: String },
    #[error("section `{0}` is not extended")]
    NotExtended(String),
    #[error("no legal start exists for extended section `{0}`")]
    NoLegalStart(String),
    #[error("unknown selector `{0}`")]
    UnknownSelector(String),
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

use thiserror::Error;

use crate::label::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("format error: {0}")]
    Format(String),
    #[error("invalid label atom {0:?}")]
    InvalidAtom(String),
    #[error("duplicate field {0}")]
    DuplicateField(String),
    #[error("labels do not form a prefix code")]
    NotPrefixCode,

    #[error("type error: {0}")]
    Type(String),

    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("evaluation stuck: {0}")]
    Stuck(String),
    #[error("division by zero")]
    DivideByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("label domains overlap")]
    DomainOverlap,
    #[error("cannot evaluate a hole")]
    EvalHole,

    #[error("replay: control flow mismatch at {path}: recorded {recorded}, got {actual}")]
    ControlFlowMismatch {
        path: String,
        recorded: bool,
        actual: bool,
    },
    #[error("replay: missing trace for label {label} at {path}")]
    MissingTraceLabel { path: String, label: Label },
    #[error("replay: hole encountered at {path}")]
    HoleEncountered { path: String },

    #[error("patterns are incompatible")]
    Incompatible,
    #[error("pattern shape error: {0}")]
    Shape(String),
    #[error("pattern does not match: {0}")]
    PatternMismatch(String),
    #[error("inner pattern is not below the outer pattern")]
    NotNested,
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Format(_)
            | Error::InvalidAtom(_)
            | Error::DuplicateField(_)
            | Error::NotPrefixCode => 2,
            Error::Type(_) => 3,
            Error::ControlFlowMismatch { .. }
            | Error::MissingTraceLabel { .. }
            | Error::HoleEncountered { .. } => 4,
            Error::Incompatible | Error::Shape(_) | Error::PatternMismatch(_) | Error::NotNested => 5,
            Error::UnboundVariable(_)
            | Error::Stuck(_)
            | Error::DivideByZero
            | Error::Overflow
            | Error::DomainOverlap
            | Error::EvalHole => 1,
        }
    }

    /// Prepends a step to the path of a replay failure.
    pub(crate) fn at(self, step: &str) -> Error {
        let join = |p: String| {
            if p.is_empty() {
                if step.is_empty() { "/".to_string() } else { step.to_string() }
            } else {
                format!("{step}/{p}")
            }
        };
        match self {
            Error::ControlFlowMismatch {
                path,
                recorded,
                actual,
            } => Error::ControlFlowMismatch {
                path: join(path),
                recorded,
                actual,
            },
            Error::MissingTraceLabel { path, label } => Error::MissingTraceLabel {
                path: join(path),
                label,
            },
            Error::HoleEncountered { path } => Error::HoleEncountered { path: join(path) },
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

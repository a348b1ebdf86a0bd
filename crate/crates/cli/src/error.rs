use serde::Serialize;
use thiserror::Error;

/// Every failure the command line can report. Each variant has a stable
/// machine-readable code, see [`CliError::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("invalid arrangement file: {0}")]
    InvalidSpec(String),
    #[error("no modulus given in the file or with --modulus")]
    MissingModulus,
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("subspace {name:?}: equation rows must have {expected} entries, found {found}")]
    BadEquationRow {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("subspace {name:?}: cannot read {value} as a rational number")]
    BadRational { name: String, value: String },
    #[error("subspace {0:?} is not proper: its equations have rank zero")]
    NotProper(String),
    #[error("subspace {0:?} is empty: its equations are inconsistent")]
    EmptySubspace(String),
    #[error("duplicate subspace name {0:?}")]
    DuplicateName(String),
    #[error("subspaces {0:?} and {1:?} are the same subspace")]
    DuplicateSubspace(String, String),
    #[error("this command needs {0}")]
    MissingFlag(&'static str),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0}")]
    TooManyPoints(String),
    #[error("no transverse arrangement found: {0}")]
    Transverse(String),
    #[error("invariant {check} failed: {detail}")]
    InvariantFailure { check: String, detail: String },
    #[error("computation failed: {0}")]
    Computation(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::MalformedJson(_) => "malformed_json",
            CliError::InvalidSpec(_) => "invalid_spec",
            CliError::MissingModulus => "missing_modulus",
            CliError::BadModulus(_) => "bad_modulus",
            CliError::BadEquationRow { .. } => "bad_equation_row",
            CliError::BadRational { .. } => "bad_rational",
            CliError::NotProper(_) => "not_proper",
            CliError::EmptySubspace(_) => "empty_subspace",
            CliError::DuplicateName(_) => "duplicate_name",
            CliError::DuplicateSubspace(..) => "duplicate_subspace",
            CliError::MissingFlag(_) => "missing_flag",
            CliError::NotPrime(_) => "not_prime",
            CliError::TooManyPoints(_) => "too_many_points",
            CliError::Transverse(_) => "transverse_failed",
            CliError::InvariantFailure { .. } => "invariant_failure",
            CliError::Computation(_) => "computation_failed",
        }
    }

    pub(crate) fn invariant(check: &str, detail: impl Into<String>) -> Self {
        CliError::InvariantFailure {
            check: check.to_string(),
            detail: detail.into(),
        }
    }

    pub(crate) fn computation(e: impl std::fmt::Display) -> Self {
        CliError::Computation(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    error: ErrorBody<'a>,
}

/// `{"error": {"code": .., "message": ..}}`, pretty-printed.
pub fn error_json(e: &CliError) -> String {
    let doc = ErrorDocument {
        error: ErrorBody {
            code: e.code(),
            message: e.to_string(),
        },
    };
    serde_json::to_string_pretty(&doc).expect("error documents serialize")
}

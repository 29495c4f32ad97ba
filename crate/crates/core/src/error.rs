use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("rank-deficient lattice: rank {rank} in ambient dimension {dim}")]
    RankDeficient { rank: usize, dim: usize },

    #[error("parse error at offset {offset}: {kind}")]
    Parse { offset: usize, kind: ParseErrorKind },

    #[error("invalid rational number `{0}`")]
    InvalidRational(String),

    #[error("superpotential is not invariant under the group: {0}")]
    NotInvariant(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration needs {required} elements, which exceeds the cap of {cap}")]
    CapExceeded { required: String, cap: u64 },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("model file: {0}")]
    ModelFile(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnknownVariable(String),
    DuplicateVariable(String),
    NumericCoefficient(String),
    BadExponent(String),
    DuplicateMonomial(String),
    Unexpected(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => write!(f, "empty polynomial"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::DuplicateVariable(v) => write!(f, "variable `{v}` declared twice"),
            ParseErrorKind::NumericCoefficient(c) => {
                write!(f, "explicit numeric coefficient `{c}` (all coefficients are 1)")
            }
            ParseErrorKind::BadExponent(e) => {
                write!(f, "exponent `{e}` is not a positive integer")
            }
            ParseErrorKind::DuplicateMonomial(m) => write!(f, "duplicate monomial `{m}`"),
            ParseErrorKind::Unexpected(t) => write!(f, "unexpected {t}"),
        }
    }
}

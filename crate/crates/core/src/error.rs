use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants fall into three families that the CLI maps onto exit codes:
/// input problems (parse, descriptor, shape, domain), mathematical
/// preconditions that failed on otherwise valid input (not a unit, not enough
/// precision), and internal-consistency failures that indicate a bug or an
/// unstable truncation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring descriptor: {0}")]
    Descriptor(String),

    #[error("rings are incompatible: {0}")]
    RingMismatch(String),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("not an automorphism: coefficient at t^{index} {reason}")]
    Shape { index: i64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { pos: usize, name: String },

    #[error("exponent overflow at {pos}")]
    ExponentOverflow { pos: usize },

    #[error("stabilization not detected: {0}")]
    Window(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for failures that signal a bug or an unstable truncation rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Window(_) | Error::Inconsistent(_))
    }

    /// Character offset into the parsed text, for parse errors.
    pub fn position(&self) -> Option<usize> {
        match self {
            Error::Parse { pos, .. } | Error::UnknownIdentifier { pos, .. } | Error::ExponentOverflow { pos } => {
                Some(*pos)
            }
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

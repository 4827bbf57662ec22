use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the engine.
///
/// Everything except [`Error::Invariant`] is a precondition violation on the
/// caller's side. `Invariant` means an internal cross-check disagreed, which
/// the command line reports with a distinct exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mixed numeric modes: {0}")]
    MixedMode(String),

    #[error("{0} requires exact mode")]
    ExactRequired(&'static str),

    #[error("a point needs at least one coordinate")]
    EmptyPoint,

    #[error("{name} = {value} is out of range: {expected}")]
    IndexOutOfRange {
        name: &'static str,
        value: i64,
        expected: String,
    },

    #[error("{0}")]
    Precondition(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomials over different variables: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),

    #[error("the zero polynomial has no Sturm sequence")]
    ZeroPolynomial,

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn index(name: &'static str, value: i64, expected: impl Into<String>) -> Self {
        Error::IndexOutOfRange {
            name,
            value,
            expected: expected.into(),
        }
    }

    pub(crate) fn parse(what: &'static str, input: &str, reason: impl ToString) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.to_string(),
        }
    }

    /// True for errors that signal a broken internal cross-check rather than bad input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

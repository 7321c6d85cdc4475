use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe must declare at least one variable")]
    EmptyUniverse,
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("universe has {size} variables, the limit is {limit}")]
    UniverseTooLarge { size: usize, limit: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable index {index} outside a universe of {size} variables")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("both sides of an independence statement must be nonempty")]
    EmptySide,
    #[error("the three components of an independence statement must be pairwise disjoint")]
    OverlappingSides,
    #[error("operands belong to different universes")]
    UniverseMismatch,
    #[error(
        "{operation} is limited to {limit} variables, got {size} (raise the limit to override)"
    )]
    GuardExceeded {
        operation: &'static str,
        size: usize,
        limit: usize,
    },
    #[error(
        "relation is not closed under the semi-graphoid axioms: {missing} is derivable but absent"
    )]
    NotClosed { missing: String },
    #[error("self-arc on `{0}`")]
    SelfArc(String),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(String, String),
    #[error("cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("{0} is not strongly d-separated in the graph")]
    NotStronglySeparated(String),
    #[error("missing `vars:` declaration")]
    MissingVars,
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {source}")]
    InFile { path: String, source: Box<Error> },
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        match self {
            e @ Error::AtLine { .. } => e,
            e => Error::AtLine {
                line,
                source: Box::new(e),
            },
        }
    }

    /// Line number for errors raised while parsing a document.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::AtLine { line, .. } => Some(*line),
            Error::InFile { source, .. } => source.line(),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

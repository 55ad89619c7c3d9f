use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("event `tau` is reserved for the silent event and cannot be declared")]
    ReservedTau,

    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),

    #[error("duplicate state `{0}`")]
    DuplicateState(String),

    #[error("unknown event `{0}`")]
    UnknownEvent(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("event `{name}` has conflicting flags across components")]
    EventFlagConflict { name: String },

    #[error("partition does not cover the state set: {0}")]
    InvalidPartition(String),

    #[error("automaton `{0}` is not deterministic")]
    Nondeterministic(String),

    #[error("malformed run: {0}")]
    MalformedRun(String),

    #[error("invalid decorated event `{0}`")]
    InvalidDecoratedEvent(String),

    #[error("event name `{0}` may not contain `@` or `:`")]
    InvalidEventName(String),

    #[error("alphabet list has {alphabets} entries for {components} components")]
    AlphabetMismatch { components: usize, alphabets: usize },

    #[error("constraint needs {needed} states, budget is {budget}")]
    ConstraintBudget { needed: usize, budget: usize },

    #[error("constraint decision alphabet is empty")]
    EmptyDecisionAlphabet,

    #[error("product lacks component origin metadata: {0}")]
    MissingOrigin(String),

    #[error("at least one component is required")]
    NoComponents,

    #[error("opacity unenforceable for component {index} (`{name}`): the desired observer is empty")]
    Unenforceable { index: usize, name: String },

    #[error("no constrained edit function exists: the supervisor is empty")]
    EmptySupervisor,

    #[error("event `{event}` is not enabled at state `{state}`")]
    EventNotEnabled { event: String, state: String },

    #[error("decision `{decision}` is forbidden at state `{state}`")]
    ForbiddenDecision { decision: String, state: String },

    #[error("invalid random spec: {0}")]
    InvalidRandomSpec(String),

    #[error("{path}: {message}")]
    Document { path: String, message: String },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

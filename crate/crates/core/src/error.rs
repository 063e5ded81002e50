use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("operator {op} is not part of language {lang}")]
    NotInLanguage { op: &'static str, lang: &'static str },

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown state space `{0}`")]
    UnknownSpace(String),

    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),

    #[error("invalid model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),

    #[error("vocabulary {vocabulary} is not a subset of the model atoms")]
    NotSubset { vocabulary: String },

    #[error("{atoms} atoms exceed the lattice cap of {cap} (set AWAREKIT_LATTICE_CAP to override)")]
    LatticeCap { atoms: usize, cap: usize },

    #[error("model too large: {0}")]
    TooLarge(String),

    #[error("frame defect: {0}")]
    FrameDefect(String),

    #[error("awareness map fails {property}: {witness}")]
    AwarenessProperty { property: &'static str, witness: String },

    #[error("awareness map is not total: missing {0}")]
    NotTotal(String),

    #[error("relation of agent {agent} is not an equivalence relation: {witness}")]
    NotEquivalence { agent: String, witness: String },

    #[error("agents do not know what they are aware of: {0}")]
    KnowAwarenessFailure(String),

    #[error("no state space has the full atom set as its defined atoms")]
    NoFullSpace,

    #[error("several minimal state spaces define atoms {atoms}: {candidates}")]
    AmbiguousMinimum { atoms: String, candidates: String },

    #[error("{0}")]
    Mismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn syntax(pos: usize, message: impl Into<String>) -> Self {
        Error::Syntax { pos, message: message.into() }
    }
}

use thiserror::Error;

use crate::graph::Violation;

#[derive(Debug, Error)]
pub enum GbsError {
    #[error("invalid graph: {}", summarize(.0))]
    InvalidGraph(Vec<Violation>),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("word is not closed: it starts at {start} and ends at {end}")]
    NotClosed { start: String, end: String },
    #[error("element is elliptic")]
    Elliptic,
    #[error("invalid spanning tree: {0}")]
    BadTree(String),
    #[error("substitution violates a defining relation: {0}")]
    RelationViolated(String),
    #[error("marking is not an isomorphism: {0}")]
    BadMarking(String),
    #[error("invalid move: {0}")]
    BadMove(String),
    #[error("candidate {0} is elliptic in the target tree")]
    EllipticCandidate(String),
    #[error("too many candidates (more than {0})")]
    TooManyCandidates(usize),
    #[error("transition matrix is not primitive")]
    NotPrimitive,
    #[error("invalid train track map: {}", .0.join("; "))]
    InvalidMap(Vec<String>),
    #[error("search window [{lo}, {hi}] exhausted: {what}")]
    WindowExhausted { lo: i64, hi: i64, what: String },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn summarize(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, GbsError>;

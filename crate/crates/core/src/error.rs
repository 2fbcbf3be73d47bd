use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (bad ids, wrong graph, parse failures).
    #[error("invalid input: {0}")]
    Input(String),

    #[error("split of {first} and {second} would create a loop at {vertex}")]
    Loop {
        first: EdgeId,
        second: EdgeId,
        vertex: VertexId,
    },

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A lemma's hypotheses did not hold at the scale attempted. Not a bug.
    #[error("hypothesis not met at {stage}: {detail}")]
    HypothesisNotMet { stage: String, detail: String },

    #[error("no path from source set to target set: {0}")]
    NoPath(String),

    /// A state the underlying mathematics rules out. Always a bug.
    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn hypothesis(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::HypothesisNotMet {
            stage: stage.into(),
            detail: detail.into(),
        }
    }

    /// True for failures that mean "the instance is too small or too sparse",
    /// as opposed to malformed input or bugs.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::HypothesisNotMet { .. } | Error::Precondition(_) | Error::NoPath(_)
        )
    }
}

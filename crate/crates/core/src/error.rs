use alloc::string::String;

use crate::model::{Layer, NodeId};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid infrastructure: {0}")]
    Infrastructure(String),

    #[error("node {node} is not a feasible {layer} node for task {task}")]
    InfeasibleAction { task: usize, layer: Layer, node: NodeId },

    #[error("no feasible node for task {task}")]
    SchedulingFailure { task: usize },

    #[error("episode already finished")]
    EpisodeDone,

    #[error("incomplete trace: {assigned} of {expected} tasks assigned")]
    IncompleteTrace { assigned: usize, expected: usize },

    #[error("instance too large for exact search: {tasks} tasks (limit {limit})")]
    InstanceTooLarge { tasks: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("stale forward cache")]
    StaleCache,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

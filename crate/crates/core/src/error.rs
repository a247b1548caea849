use thiserror::Error;

use crate::graph::{CellCoord, GraphKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph size {0}")]
    InvalidSize(usize),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("node `{0}` has no partition side")]
    MissingPartition(String),
    #[error("edge `{0}`-`{1}` joins two nodes on the same side")]
    NotBipartite(String, String),
    #[error("cell {cell} is occupied by both `{first}` and `{second}`")]
    DuplicateCell {
        cell: CellCoord,
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TapeError {
    #[error("advice tape underrun: needed bit {needed} but only {written} bits are written")]
    Underrun { needed: usize, written: usize },
    #[error("encoded integer needs {0} bits, more than 64")]
    Overflow(u64),
    #[error("invalid tape character {0:?}")]
    BadChar(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("request {step} names node index {node} outside the graph")]
    UnknownNode { step: usize, node: usize },
    #[error("request {step} cancels at `{node}` which has no live requests")]
    CancelWithoutLive { step: usize, node: String },
    #[error("assignment log has {got} entries, instance has {expected} requests")]
    LogLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search budget exceeded; optimum lies in [{lower}, {upper}]")]
    BudgetExceeded { lower: u32, upper: u32 },
    #[error("instance exceeds the oracle size caps: {nodes} requested nodes, {requests} requests")]
    TooLarge { nodes: usize, requests: usize },
    #[error("operation requires a {expected} graph, got {got}")]
    WrongKind {
        expected: &'static str,
        got: GraphKind,
    },
    #[error("instance contains cancellations")]
    HasCancellations,
    #[error("truncation width must be at least 1")]
    ZeroWidth,
    #[error("plan inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayerError {
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error("request {step}: no color available at `{node}` (advice too small)")]
    CapacityExceeded { step: usize, node: String },
    #[error("request {step}: cancelled color {color} is not assigned at `{node}`")]
    BadCancel {
        step: usize,
        node: String,
        color: u32,
    },
    #[error("request {step}: {reason}")]
    InconsistentAdvice { step: usize, reason: String },
    #[error("algorithm {algo} does not support {what}")]
    Unsupported { algo: &'static str, what: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("path family needs n >= 40, got {0}")]
    SequenceTooShort(usize),
    #[error("gadget size {0} is not a positive multiple of 4")]
    GadgetSize(u32),
    #[error("a chain needs at least one unit")]
    NoUnits,
    #[error("branch tuple has {got} entries for {k} units")]
    BranchLength { k: usize, got: usize },
    #[error("random instances need at least one node")]
    NoNodes,
    #[error("embedding rejected: {0}")]
    Embedding(#[from] GraphError),
}

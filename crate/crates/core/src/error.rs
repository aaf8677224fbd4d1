use thiserror::Error;

use crate::diagram::Port;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid shape {shape:?}: {reason}")]
    InvalidShape { shape: Vec<usize>, reason: String },

    #[error("extent mismatch for label '{label}': {first} vs {second}")]
    ExtentMismatch {
        label: char,
        first: usize,
        second: usize,
    },

    #[error("output label '{0}' does not appear in any operand")]
    UnknownOutputLabel(char),

    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("einsum needs at least one operand")]
    EmptyOperandList,

    #[error("expected {expected} operands, got {got}")]
    OperandCountMismatch { expected: usize, got: usize },

    #[error("operand {operand} has rank {rank} but {labels} labels")]
    LabelCountMismatch {
        operand: usize,
        rank: usize,
        labels: usize,
    },

    #[error("output label '{0}' listed more than once in a pairwise contraction")]
    RepeatedOutputLabel(char),

    #[error("invalid permutation {perm:?} for rank {rank}")]
    InvalidPermutation { perm: Vec<usize>, rank: usize },

    #[error("expected rank {expected}, got rank {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("vector of length {len} cannot be reshaped to {dims:?}")]
    ExtentProductMismatch { len: usize, dims: Vec<usize> },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("matrix of shape {0:?} is not square")]
    NotSquare(Vec<usize>),

    #[error("inner extents differ: {left} vs {right}")]
    InnerExtentMismatch { left: usize, right: usize },

    #[error("dense materialization of {requested} entries exceeds cap of {cap}")]
    CapExceeded { requested: u128, cap: usize },

    #[error("contraction cost {cost} exceeds budget {budget}")]
    BudgetExceeded { cost: u128, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid signature '{0}': expected three characters from '+' and '-'")]
    InvalidSignature(String),

    #[error("diagram has no nodes and no free wires")]
    EmptyDiagram,

    #[error("port {0} is neither wired nor free")]
    DanglingPort(Port),

    #[error("port {0} is used more than once")]
    PortReuse(Port),

    #[error("port {0} does not exist")]
    UnknownPort(Port),

    #[error("wire {a} -- {b} joins extents {ea} and {eb}")]
    WireExtentMismatch {
        a: Port,
        b: Port,
        ea: usize,
        eb: usize,
    },

    #[error("unknown identity '{0}'")]
    UnknownIdentity(String),

    #[error("shape contract violated for '{identity}': {constraint}")]
    ShapeContract { identity: String, constraint: String },

    #[error("malformed tensor json: {0}")]
    Json(String),

    #[error("non-finite value at flat index {0}")]
    NonFinite(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

use thiserror::Error;

use crate::linmap::SpaceTag;

/// Errors raised while reading or manipulating graphs and operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: malformed input: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("missing header line `n=<count>`")]
    MissingHeader,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("graph has no edge ({0}, {1})")]
    MissingEdge(usize, usize),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("duplicate directed edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({i}, {j}) references a vertex outside 0..{n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("symmetric mode requires the reversal of edge ({0}, {1})")]
    SymmetricModeViolation(usize, usize),
    #[error("operation requires an oriented-mode graph")]
    RequiresOriented,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("space mismatch: expected {expected:?}, found {found:?}")]
    SpaceMismatch { expected: SpaceTag, found: SpaceTag },
    #[error("operator is not self-adjoint")]
    NotSelfAdjoint,
    #[error("not an eigenpair: residual {residual:e} exceeds tolerance {tol:e}")]
    NotAnEigenpair { residual: f64, tol: f64 },
    #[error("eigenvalue {energy:e} is not above tolerance {tol:e}")]
    EnergyBelowTolerance { energy: f64, tol: f64 },
    #[error("spanning tree does not belong to this graph: {0}")]
    TreeMismatch(String),
    #[error("odd entry at ({row}, {col}) cannot be halved exactly")]
    OddEntry { row: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::coeffs::expr::EvalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // graph construction
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` refers to undeclared node `{node}`")]
    DanglingEndpoint { edge: String, node: String },
    #[error("edge `{edge}` has non-positive or non-finite length {length}")]
    NonPositiveLength { edge: String, length: f64 },
    #[error("edge `{0}` closes a cycle")]
    CycleDetected(String),
    #[error("graph is disconnected: node `{0}` is unreachable")]
    Disconnected(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("point {x} lies outside edge `{edge}` of length {length}")]
    OutOfDomain { edge: String, x: f64, length: f64 },
    #[error("point lies on a node; an interior point is required")]
    PointAtNode,
    #[error("the two points coincide")]
    CoincidentPoints,
    #[error("no root node designated")]
    NoRootDesignated,

    // coefficients
    #[error("coefficient evaluation failed on edge `{edge}`: {source}")]
    CoefficientEvaluation { edge: String, source: EvalError },
    #[error("p is not positive on edge `{edge}` (min sampled value {min})")]
    NonPositiveP { edge: String, min: f64 },
    #[error("rho must be positive and finite on edge `{edge}` (got {rho})")]
    NonPositiveRho { edge: String, rho: f64 },
    #[error("invalid river data on edge `{edge}`: {reason}")]
    InvalidRiverData { edge: String, reason: String },
    #[error("coefficient table for edge `{edge}` does not cover [0, {length}]")]
    TableCoverage { edge: String, length: f64 },
    #[error("invalid coefficient table: {0}")]
    InvalidTable(String),
    #[error("p jumps by {jump:e} across node `{node}`; the tree formula needs p continuous at nodes")]
    DiscontinuousP { node: String, jump: f64 },
    #[error("expected {expected} per-edge entries, got {got}")]
    EdgeCountMismatch { expected: usize, got: usize },

    // integration
    #[error("step size underflow at x = {x} on edge `{edge}`")]
    StepSizeUnderflow { edge: String, x: f64 },
    #[error("integration on edge `{edge}` exceeded {steps} steps")]
    TooManySteps { edge: String, steps: usize },
    #[error("adaptive quadrature did not reach tolerance (estimated error {estimate:e})")]
    QuadratureFailure { estimate: f64 },

    // node conditions
    #[error("boundary node `{0}` has no condition")]
    MissingBoundarySpec(String),
    #[error("node `{0}` is not a boundary node")]
    NotBoundaryNode(String),
    #[error("invalid Robin coefficients at node `{0}`")]
    InvalidRobin(String),
    #[error("trace is missing the endpoint data of edge `{0}`")]
    IncompleteTrace(String),
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    // Green's function construction
    #[error("problem is degenerate (rcond = {rcond:e})")]
    DegenerateProblem { rcond: f64 },
    #[error("p*W is not constant on edge `{edge}` (spread {spread:e})")]
    NonConstantWronskian { edge: String, spread: f64 },
    #[error("interval kernel on edge `{0}` is degenerate for both Dirichlet and Neumann far ends")]
    IntervalDegenerate(String),

    // finite-difference oracle
    #[error("mesh must have at least 8 intervals per edge (got {0})")]
    MeshTooCoarse(usize),
    #[error("discrete system is singular")]
    SingularSystem,

    #[error("unknown kernel strategy `{0}`")]
    UnknownKernel(String),
}

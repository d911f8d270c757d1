use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("window is empty")]
    EmptyWindow,
    #[error("vertex {0} is not in the window")]
    UnknownVertex(usize),
    #[error("graph is not a tree")]
    NotATree,
    #[error("boundary of a degree-0 chain is undefined")]
    DegreeZeroBoundary,
    #[error("chain degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("Rips radius must be positive")]
    ZeroRadius,
    #[error("circuit too short: length {0} < 3")]
    CircuitTooShort(usize),
    #[error("walk is not a circuit of the base graph: {0}")]
    NotACircuit(String),
    #[error("simplex {0:?} is not in the complex")]
    NotInComplex(Vec<usize>),
    #[error("chain is not closed on the inner region")]
    NotACycle,
    #[error("flow decomposition left a nonzero residue")]
    NonzeroResidue,
    #[error("dominance r <= phi violated on edge {0:?}")]
    DominanceViolated((usize, usize)),
    #[error("boundary defects sum to {0}, expected 0")]
    DefectSumNonzero(i64),
    #[error("expected exactly one pseudo-end outside the set, found {0}")]
    PseudoEndCount(usize),
    #[error("no connecting path between {0} and {1} outside the set")]
    NoConnectingPath(usize, usize),
    #[error("circuit enumeration exceeded the cap of {0} circuits")]
    CircuitCap(usize),
    #[error("margin {margin} must be smaller than the window radius {radius}")]
    MarginTooLarge { margin: usize, radius: usize },
    #[error("invalid tree spec: {0}")]
    InvalidTreeSpec(String),
    #[error("tameness clause {clause} failed: {detail}")]
    Tameness { clause: u8, detail: String },
    #[error("coefficient recovery is not well defined on bip {0}")]
    IllDefinedCoefficient(usize),
    #[error("coefficient of bip {0} exceeds twice the sup-norm of the cycle")]
    NormBound(usize),
    #[error("separator set is not connected")]
    DisconnectedSeparator,
    #[error("separator set meets the window boundary")]
    SeparatorTouchesBoundary,
    #[error("window is disconnected")]
    DisconnectedWindow,
    #[error("separator bijection fails at K_{0}")]
    SeparatorBijection(usize),
    #[error("window bip has no parallel tree path")]
    NoTreeParallel,
    #[error("exact Cheeger enumeration supports at most 24 vertices, got {0}")]
    TooManyVertices(usize),
    #[error("expansion lower bound must be positive")]
    NonPositiveEpsilon,
    #[error("max-flow infeasible: window boundary unreachable from W")]
    FlowInfeasible,
    #[error("W must be a subset of U")]
    NotSubset,
    #[error("boundary of f is not supported on the vertex boundary of U")]
    DefectOffBoundary,
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh needs at least 3 vertices and 1 triangle")]
    TooSmall,
    #[error("vertex {0} has a non-finite coordinate")]
    NonFiniteVertex(usize),
    #[error("triangle {triangle} references vertex {index} which does not exist")]
    IndexOutOfRange { triangle: usize, index: usize },
    #[error("triangle {0} has zero area")]
    ZeroArea(usize),
    #[error("triangle {0} duplicates triangle {1}")]
    DuplicateTriangle(usize, usize),
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("boundary edge ({0}, {1}) has no tag")]
    UntaggedBoundary(usize, usize),
    #[error("invalid boundary specification: {0}")]
    InvalidBoundary(String),
    #[error("periodic pair {0}: {1}")]
    Periodic(u32, String),
    #[error("dual cell {0} has a degenerate subtriangle")]
    DegenerateDual(usize),
    #[error("mesh generator: {0}")]
    Generator(String),
    #[error("mesh file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("triplet ({row}, {col}) out of range for dimension {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("conjugate gradient breakdown at iteration {0}: matrix is not positive definite")]
    Breakdown(usize),
    #[error("non-finite value encountered at iteration {0}")]
    NonFinite(usize),
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("non-finite flux on dual interface {face} between cells {i} and {j}: q_i = {q_i:?}, q_j = {q_j:?}, h_i = {h_i}, h_j = {h_j}")]
    NonFiniteFlux {
        face: usize,
        i: usize,
        j: usize,
        q_i: [f64; 2],
        q_j: [f64; 2],
        h_i: f64,
        h_j: f64,
    },
    #[error("free-surface solve failed: {0}")]
    Solve(#[from] SolveError),
    #[error("boundary edge {0} needs prescribed data but the case provides none")]
    MissingBoundaryData(usize),
    #[error("non-finite state after step in {0}")]
    NonFiniteState(&'static str),
    #[error("invalid time step {0}")]
    InvalidTimeStep(f64),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("line {line}: key `{key}`: expected {expected}, got `{value}`")]
    Type {
        line: usize,
        key: String,
        expected: &'static str,
        value: String,
    },
    #[error("`{key}` out of range: {msg}")]
    Range { key: String, msg: String },
    #[error("missing case name")]
    MissingCase,
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Top-level error for drivers that touch every stage.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("step {step} at t = {time}: {source}")]
    Step {
        step: usize,
        time: f64,
        #[source]
        source: StepError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Validation problems (bad input) as opposed to runtime failures.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Mesh(_) | Error::Config(_) | Error::Invalid(_))
    }
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        Self { message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpcalcError {
    #[error("block operator of shape {rows}x{cols} cannot hold {entries} entries")]
    Shape { rows: usize, cols: usize, entries: usize },
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("gaussian decay rate must be positive, got {0}")]
    NonPositiveDecay(String),
    #[error("gaussian decay rates differ: {0} vs {1}")]
    DecayMismatch(String, String),
    #[error("empty gaussian vector")]
    EmptyVector,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("grid needs n >= 8 points per axis, got {0}")]
    TooFewPoints(usize),
    #[error("grid half-width must be positive and finite, got {0}")]
    BadHalfWidth(f64),
    #[error("field has zero norm")]
    ZeroNorm,
    #[error("radius {radius} outside (0, {half_width}]")]
    BadRadius { radius: f64, half_width: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field contains non-finite values")]
    NonFinite,
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SusyError {
    #[error("model invalid: {0}")]
    InvalidModel(String),
    #[error("operator must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator of indefinite parity cannot act on the graded module")]
    IndefiniteParity,
    #[error("output leaks into the wrong parity sector (relative leakage {0:e})")]
    ParityLeak(f64),
    #[error("expected a {expected}-component field, got {got}")]
    Components { expected: usize, got: usize },
    #[error(transparent)]
    Opcalc(#[from] OpcalcError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("eigensolver did not converge after {iterations} iterations (basis {basis}, worst residual {worst_residual:e}, tol {tol:e})")]
    NoConvergence { iterations: usize, basis: usize, worst_residual: f64, tol: f64 },
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("multiplier vanishes on the contour (|value| = {0:e})")]
    ZeroOnContour(f64),
    #[error("winding needs a derivative-free multiplier")]
    NotMultiplication,
    #[error(transparent)]
    Susy(#[from] SusyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("decay fit window holds {0} nodes, need at least 30")]
    InsufficientWindow(usize),
    #[error("mode vanishes inside the fit window")]
    VanishingMode,
    #[error("convergence study needs at least 3 grids with distinct spacing, got {0}")]
    DegenerateGrids(usize),
    #[error("coupling c = {0} must be below 1")]
    CouplingTooLarge(f64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Susy(#[from] SusyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

//! Error type shared by every solver in this crate.

use thiserror::Error;

/// Errors raised by grid construction, quadrature and the inversion pipelines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("malformed grid: {0}")]
    MalformedGrid(String),
    #[error("|g| = {value:.3e} below tolerance at k = {k:.6}; winding undefined")]
    ZeroCrossing { k: f64, value: f64 },
    #[error("winding {raw:.4} is farther than {guard} from an integer; grid under-resolved")]
    NonIntegerWinding { raw: f64, guard: f64 },
    #[error("integrand tail {value:.3e} at grid end exceeds tolerance {tol:.3e} and no tail model fits")]
    TailNotResolved { value: f64, tol: f64 },
    #[error("potential does not decay: |q| = {value:.3e} at x = {x:.3}")]
    NoDecay { x: f64, value: f64 },
    #[error("bound-state zero at k = {k:.6} is not simple: |df/dk| = {derivative:.3e}")]
    NonSimpleZero { k: f64, derivative: f64 },
    #[error("phase jump {jump:.4} rad between k = {k_lo:.4} and k = {k_hi:.4} exceeds pi")]
    UnwrapAmbiguity { k_lo: f64, k_hi: f64, jump: f64 },
    #[error("kappa = {kappa:.6} collides with bound state k_j = {kj:.6}")]
    KappaCollision { kappa: f64, kj: f64 },
    #[error("index {index} inconsistent with {bound} bound states")]
    IndexMismatch { index: i64, bound: usize },
    #[error("log branch jump {jump:.4} rad at k = {k:.4}; factorization aborted")]
    BranchError { k: f64, jump: f64 },
    #[error("|f| = {0:.3e} vanishes on the grid interior")]
    ZeroModulus(f64),
    #[error("Im I(k) = {value:.3e} <= 0 at k = {k:.4}")]
    NonHerglotz { k: f64, value: f64 },
    #[error("discretized operator is numerically singular ({0})")]
    SingularOperator(String),
    #[error("contraction iteration failed: {0}")]
    ContractionFailed(String),
    #[error("1 + Htilde(k) = {value:.3e} <= 0 at k = {k:.4}")]
    PositivityViolated { k: f64, value: f64 },
    #[error("Toeplitz recursion breakdown at step {step}: reflection coefficient {coeff:.6}")]
    RecursionBreakdown { step: usize, coeff: f64 },
    #[error("gamma = {gamma:.6} collides with bound state k_j = {kj:.6}")]
    GammaCollision { gamma: f64, kj: f64 },
    #[error("iteration diverged: {0}")]
    IterationDiverged(String),
    #[error("phase shifts underflow before the tail stabilizes; usable l range is 0..={usable}")]
    Underflow { usable: usize },
    #[error("degenerate-kernel system is numerically singular at x = {0:.4}")]
    SingularSystem(f64),
    #[error("|A(k)| = {value:.3e} below tolerance at k = {k:.4}")]
    ZeroResponse { k: f64, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

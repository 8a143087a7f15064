use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("fft length {0} is not a power of two")]
    FftLength(usize),
    #[error("quadrature did not converge: best estimate error {error:.3e} > tol {tol:.3e}")]
    QuadNoConvergence { error: f64, tol: f64 },
    #[error("linear fit needs at least two distinct abscissae")]
    DegenerateFit,
    #[error("log-gamma pole at non-positive integer {0}")]
    GammaPole(f64),
    #[error("jump exponent beta must not be an integer (got {0})")]
    IntegerBeta(f64),
    #[error("|Re beta| must be < 1/2 for this operation (got {0})")]
    BetaOutOfStrip(f64),
    #[error("theta must lie strictly inside (0, 2pi)")]
    ThetaOnJump,
    #[error("winding number undefined: curve passes within {0:.3e} of the origin")]
    WindingUndefined(f64),
    #[error("curve is not closed (gap {0:.3e})")]
    CurveNotClosed(f64),
    #[error("branch tracking failed: phase jump {jump:.3} rad between adjacent samples at grid size {grid}")]
    BranchTracking { jump: f64, grid: usize },
    #[error("symbol fails class membership: {0}")]
    ClassViolation(String),
    #[error("Levinson recursion breakdown at size {0}")]
    LevinsonBreakdown(usize),
    #[error("matrix is singular (zero pivot at step {0})")]
    SingularMatrix(usize),
    #[error("eigenvalue iteration failed to converge for {failed} of {total} eigenvalues")]
    EigenNoConvergence { failed: usize, total: usize },
    #[error("phase unwrap ambiguous: step of {0:.3} rad between adjacent sizes; densify the size list")]
    PhaseUnwrap(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("symbol config: {0}")]
    Config(String),
}

use thiserror::Error;

/// Errors raised by the billiard library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Inputs that do not belong together (mixed surfaces, different base points, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// An inverse trigonometric argument left its domain by more than the clamp tolerance.
    #[error("numerical domain error in {what}: argument {value}")]
    NumericalDomain { what: &'static str, value: f64 },

    /// Two points that should span a chord coincide.
    #[error("degenerate chord: endpoints coincide")]
    DegenerateChord,

    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A curve failed one of the oval invariants.
    #[error("invalid oval: {0}")]
    InvalidOval(String),

    /// Root finding for the next impact failed.
    #[error("solver error: {0}")]
    Solver(String),

    /// Reflection angle too close to 0 or pi for the map to be evaluated reliably.
    #[error("whisper orbit: psi = {psi} is within 1e-6 of the cylinder boundary")]
    WhisperOrbit { psi: f64 },

    /// An iterative method ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    /// A mixed second derivative vanished where a quotient by it is needed.
    #[error("twist degeneracy: |b_{index}| = {value:e}")]
    TwistDegeneracy { index: usize, value: f64 },

    /// Failure while iterating the map, tagged with the step that failed.
    #[error("iteration {step} failed: {source}")]
    Iteration {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

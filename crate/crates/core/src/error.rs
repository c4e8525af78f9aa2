use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter violates its validity range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A time argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Fixed integrator step too coarse for the fastest rate in the system.
    #[error("RK4 step {step} exceeds stability bound {bound} (0.05 / fastest rate)")]
    StepTooLarge { step: f64, bound: f64 },

    /// All amplitudes vanish; no state can be normalised.
    #[error("degenerate state: all two-photon amplitudes are zero")]
    DegenerateState,

    /// Two successive quadrature refinements disagree beyond tolerance.
    #[error("quadrature did not converge: refinement changed a value by {delta}")]
    QuadratureNotConverged { delta: f64 },

    /// An eigenvalue of rho * rho~ fell outside the physically allowed region.
    #[error("numeric error in concurrence eigenproblem: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

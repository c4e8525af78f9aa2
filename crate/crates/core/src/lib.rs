//! Simulation of the path-entangled two-photon state emitted by a quantum-dot
//! biexciton cascade coupled to a chiral nanophotonic waveguide.
//!
//! The biexciton decays in two steps, `|XX> -> |X> -> |g>`, emitting one photon
//! per step into the left- (`A`) or right- (`B`) propagating waveguide mode.
//! Chiral light-matter coupling converts the polarisation correlations of the
//! cascade into path correlations, so the photon pair carries a two-qubit state
//! over the basis `{AA, AB, BA, BB}`. This crate evaluates that state and its
//! entanglement under the experimentally relevant imperfections:
//!
//! * finite fine-structure splitting `S` of the exciton doublet,
//! * imperfect chirality (phase differences `Φ`, `Φ'` away from `π/2`),
//! * asymmetric decay rates of the two linear dipoles (`ε`),
//! * Gaussian timing jitter `σ` in the detection of the emission delay.
//!
//! Everything is expressed in natural units: `ħ = 1`, group velocities `= 1`,
//! rates in units of the exciton decay rate `γ_X` and times in `1/γ_X`.
//!
//! Module map:
//!
//! * [`params`] — physical parameters, derived decay rates, gauge-fixed
//!   coupling constants, regime validation.
//! * [`amplitudes`] — closed-form emission amplitudes of the cascade.
//! * [`correlations`] — path-resolved coincidence densities `P_nm(τ)`.
//! * [`entanglement`] — path density matrix and Wootters concurrence.
//! * [`jitter`] — Gaussian detection-jitter averaging and the delay-averaged
//!   concurrence.
//! * [`oracle`] — independent RK4 integration of the amplitude equations, used
//!   to validate the closed forms.
//! * [`linalg`] — dense 4x4 complex eigensolvers.
//! * [`quad`] — Gauss-Legendre quadrature.
//!
//! All math is generic over the floating-point scalar via [`scalar::Scalar`];
//! `f64` aliases for the main types are exported at the crate root.

// Index loops over fixed 4x4 matrices read better than iterator chains here,
// and `!(x > 0)` guards are deliberate NaN rejections.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitudes;
pub mod correlations;
pub mod entanglement;
mod error;
pub mod jitter;
pub mod linalg;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod scalar;

pub use error::{Error, Result};
pub use params::{
    build_couplings, derive_rates, validate_regime, CouplingTable, DerivedRates, Direction,
    ParamsConfig, PhysicalParams, Polarization,
};

pub use amplitudes::{PathPair, TwoPhotonAmplitudes};
pub use correlations::CoincidenceRecord;
pub use entanglement::{ConcurrenceValue, PathDensityMatrix};
pub use jitter::{JitterConfig, JitteredState};
pub use oracle::{ExcitonTrajectory, Rk4Config};

/// Complex number over the generic scalar.
pub type Complex<T> = num_complex::Complex<T>;

// Concrete `f64` aliases; the CLI and most call sites use these.
pub type C64 = num_complex::Complex<f64>;
pub type PhysicalParams64 = PhysicalParams<f64>;
pub type DerivedRates64 = DerivedRates<f64>;
pub type CouplingTable64 = CouplingTable<f64>;
pub type TwoPhotonAmplitudes64 = TwoPhotonAmplitudes<f64>;
pub type CoincidenceRecord64 = CoincidenceRecord<f64>;
pub type PathDensityMatrix64 = PathDensityMatrix<f64>;
pub type ConcurrenceValue64 = ConcurrenceValue<f64>;
pub type JitterConfig64 = JitterConfig<f64>;
pub type JitteredState64 = JitteredState<f64>;
pub type Rk4Config64 = Rk4Config<f64>;

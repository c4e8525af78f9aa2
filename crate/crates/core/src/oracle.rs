//! Independent numerical check of the closed-form amplitudes.
//!
//! After the biexciton photon is emitted into direction `n` at `t_XX`, the
//! two single-photon amplitudes obey
//!
//! ```text
//! dψ_x/dt = -((γ'_x + iS)/2) ψ_x - (Γ/2) ψ_y
//! dψ_y/dt = -((γ'_y - iS)/2) ψ_y - (Γ/2) ψ_x
//! ```
//!
//! with the delta-function emission source realised as an exact jump
//! condition, `ψ_{α,n}(t_XX⁺) = -i g*_{n,α} c_XX(t_XX)`. The cross-coupling
//! `Γ` (real by time-reversal symmetry) couples the two branches; the closed
//! forms assume `Γ = 0`, so integrating with `Γ ≠ 0` also quantifies the
//! normalisation error that assumption introduces.
//!
//! Integration is fixed-step classical 4th-order Runge-Kutta; no adaptive
//! machinery. Default horizon `t_max = 20/γ_X` leaves a truncation tail
//! bounded by `e^{-20}`.

use num_complex::Complex;

use crate::amplitudes::{branch_exponent, exciton_amplitude};
use crate::error::{Error, Result};
use crate::params::{CouplingTable, Direction, PhysicalParams, Polarization};
use crate::quad::GaussLegendre;
use crate::scalar::Scalar;

/// Fixed-step classical Runge-Kutta configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Config<T> {
    /// Step size (default `1e-3 / γ_X`).
    pub step: T,
    /// Integration horizon (default `20 / γ_X`).
    pub t_max: T,
}

impl<T: Scalar> Default for Rk4Config<T> {
    fn default() -> Self {
        Rk4Config {
            step: T::lit(1e-3),
            t_max: T::lit(20.0),
        }
    }
}

impl<T: Scalar> Rk4Config<T> {
    fn validate(&self) -> Result<()> {
        if !(self.step > T::zero()) || !self.step.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.t_max > T::zero()) || !self.t_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        Ok(())
    }
}

/// Sampled single-photon amplitudes after a biexciton emission into
/// direction `n` at `t_xx`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitonTrajectory<T> {
    pub t_xx: T,
    pub direction: Direction,
    pub times: Vec<T>,
    pub psi_x: Vec<Complex<T>>,
    pub psi_y: Vec<Complex<T>>,
}

impl<T: Scalar> ExcitonTrajectory<T> {
    /// Largest deviation from a reference amplitude function
    /// `f(t) -> (ψ_x, ψ_y)` over the sample grid.
    pub fn sup_error_vs<F>(&self, mut reference: F) -> T
    where
        F: FnMut(T) -> (Complex<T>, Complex<T>),
    {
        let mut worst = T::zero();
        for (k, &t) in self.times.iter().enumerate() {
            let (rx, ry) = reference(t);
            worst = worst
                .max((self.psi_x[k] - rx).norm())
                .max((self.psi_y[k] - ry).norm());
        }
        worst
    }

    /// Projects the trajectory onto the two-photon amplitude for a second
    /// emission into direction `m`:
    /// `ψ_nm(t_XX, t) = -i Σ_α g'*_{m,α} ψ_{α,n}(t)`.
    pub fn two_photon_projection(
        &self,
        m: Direction,
        couplings: &CouplingTable<T>,
    ) -> Vec<Complex<T>> {
        let minus_i = Complex::new(T::zero(), -T::one());
        let gx = couplings.g_prime(m, Polarization::X).conj();
        let gy = couplings.g_prime(m, Polarization::Y).conj();
        self.psi_x
            .iter()
            .zip(&self.psi_y)
            .map(|(&px, &py)| minus_i * (gx * px + gy * py))
            .collect()
    }
}

/// Integrates the coupled single-photon amplitude equations from the jump
/// condition at `t_xx` up to `config.t_max`, sampling every step.
pub fn integrate_exciton_pair<T: Scalar>(
    t_xx: T,
    n: Direction,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
    config: &Rk4Config<T>,
) -> Result<ExcitonTrajectory<T>> {
    config.validate()?;
    if t_xx < T::zero() || t_xx >= config.t_max {
        return Err(Error::InvalidParameter(format!(
            "t_xx must lie in [0, t_max), got {t_xx}"
        )));
    }
    let rates = params.rates();
    let fastest = rates
        .exciton_x
        .max(rates.exciton_y)
        .max(params.fss())
        .max(params.cross_gamma());
    let bound = T::lit(0.05) / fastest;
    if config.step > bound {
        return Err(Error::StepTooLarge {
            step: config.step.to_f64().unwrap_or(f64::NAN),
            bound: bound.to_f64().unwrap_or(f64::NAN),
        });
    }

    // Jump condition: psi_{alpha,n}(t_xx+) = -i g*_{n,alpha} c_XX(t_xx).
    let survival = (-rates.biexciton_total * t_xx / T::two()).exp();
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut psi_x = minus_i * couplings.g(n, Polarization::X).conj().scale(survival);
    let mut psi_y = minus_i * couplings.g(n, Polarization::Y).conj().scale(survival);

    let a = branch_exponent(Polarization::X, params);
    let c = branch_exponent(Polarization::Y, params);
    let b = Complex::new(-params.cross_gamma() / T::two(), T::zero());
    let deriv = |x: Complex<T>, y: Complex<T>| (a * x + b * y, c * y + b * x);

    let h = config.step;
    let span = config.t_max - t_xx;
    let steps = (span / h).ceil().to_usize().unwrap_or(0).max(1);

    let mut times = Vec::with_capacity(steps + 1);
    let mut xs = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    times.push(t_xx);
    xs.push(psi_x);
    ys.push(psi_y);

    let half = T::half();
    let sixth = T::one() / T::lit(6.0);
    for k in 1..=steps {
        let (k1x, k1y) = deriv(psi_x, psi_y);
        let (k2x, k2y) = deriv(psi_x + k1x.scale(h * half), psi_y + k1y.scale(h * half));
        let (k3x, k3y) = deriv(psi_x + k2x.scale(h * half), psi_y + k2y.scale(h * half));
        let (k4x, k4y) = deriv(psi_x + k3x.scale(h), psi_y + k3y.scale(h));
        psi_x += (k1x + k2x.scale(T::two()) + k3x.scale(T::two()) + k4x).scale(h * sixth);
        psi_y += (k1y + k2y.scale(T::two()) + k3y.scale(T::two()) + k4y).scale(h * sixth);
        times.push(t_xx + h * T::from_usize(k).unwrap());
        xs.push(psi_x);
        ys.push(psi_y);
    }

    Ok(ExcitonTrajectory {
        t_xx,
        direction: n,
        times,
        psi_x: xs,
        psi_y: ys,
    })
}

/// Deviation of the RK4 trajectory from the closed-form amplitudes (only
/// meaningful for `Γ = 0`, where the closed forms hold).
pub fn closed_form_deviation<T: Scalar>(
    trajectory: &ExcitonTrajectory<T>,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> T {
    let n = trajectory.direction;
    let t_xx = trajectory.t_xx;
    trajectory.sup_error_vs(|t| {
        (
            exciton_amplitude(Polarization::X, n, t, t_xx, params, couplings),
            exciton_amplitude(Polarization::Y, n, t, t_xx, params, couplings),
        )
    })
}

/// Deviation of the state-norm integral from one:
/// `|1 - Σ_nm ∫_0^tau_max |ψ_nm(τ)|² dτ / (γ_x + γ_y)|`, with the biexciton
/// emission time integrated out analytically.
///
/// Under `Γ = 0` this quantifies the normalisation error of the closed-form
/// solution; analytically it equals
/// `(1 - ε²) |cos Φ cos Φ'| γ_X² / (γ_X² + S²)`.
pub fn norm_deficit<T: Scalar>(
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
    tau_max: T,
) -> Result<T> {
    if tau_max < T::lit(20.0) / params.gamma_x() {
        return Err(Error::InvalidParameter(format!(
            "tau_max must be >= 20/gamma_X to bound the tail, got {tau_max}"
        )));
    }
    let rates = params.rates();
    // Panels narrow enough for both the decay scale and the FSS oscillation.
    let fastest = params.fss().max(rates.biexciton_total);
    let panel_width = T::PI() / (T::lit(8.0) * fastest);
    let panels = (tau_max / panel_width)
        .ceil()
        .to_usize()
        .unwrap_or(1_000_000)
        .clamp(64, 1_000_000);
    let rule = GaussLegendre::new(8);
    let total = rule.integrate_composite(T::zero(), tau_max, panels, |tau| {
        crate::correlations::state_norm_density(tau, params, couplings)
    }) / rates.biexciton_total;
    Ok((T::one() - total).abs())
}

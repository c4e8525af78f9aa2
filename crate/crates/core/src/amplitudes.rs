//! Closed-form emission amplitudes of the cascade.
//!
//! With the cross-coupling `Γ` neglected, the amplitude equations decouple and
//! solve in closed form. In the rotating frame (global optical phases dropped)
//! and with `ħ = 1`:
//!
//! ```text
//! c_XX(t)        = e^{-(γ_x+γ_y) t / 2}
//! ψ_{α,n}(t,t_XX)= -i g*_{n,α} c_XX(t_XX) e^{-(γ'_α ± iS)(t - t_XX)/2} θ(t - t_XX)
//! ψ_{nm}(τ)      = -Σ_α g*_{n,α} g'*_{m,α} e^{-(γ'_α ± iS) τ / 2} θ(τ)
//! ```
//!
//! with `+iS` on the `x` branch and `-iS` on the `y` branch (the `x` exciton
//! sits `S/2` above the rotating frame, the `y` exciton `S/2` below). Since
//! the joint state is conditioned on the first detection, the common factor
//! `e^{-(γ_x+γ_y) t_XX / 2}` cancels from every normalised quantity; the
//! two-photon amplitudes are therefore returned with it factored out, and
//! [`TwoPhotonAmplitudes::with_biexciton_time`] reinstates it when an
//! unconditioned density is wanted.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::{CouplingTable, Direction, PhysicalParams, Polarization};
use crate::scalar::Scalar;

/// Ordered two-photon path basis; the first letter is the biexciton photon's
/// direction, the second the exciton photon's (`AB` = `A_XX B_X`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathPair {
    AA = 0,
    AB = 1,
    BA = 2,
    BB = 3,
}

impl PathPair {
    pub const ALL: [PathPair; 4] = [PathPair::AA, PathPair::AB, PathPair::BA, PathPair::BB];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Direction of the biexciton (first) photon.
    pub fn biexciton_dir(self) -> Direction {
        match self {
            PathPair::AA | PathPair::AB => Direction::A,
            PathPair::BA | PathPair::BB => Direction::B,
        }
    }

    /// Direction of the exciton (second) photon.
    pub fn exciton_dir(self) -> Direction {
        match self {
            PathPair::AA | PathPair::BA => Direction::A,
            PathPair::AB | PathPair::BB => Direction::B,
        }
    }

    /// Path pair with both directions relabelled `A <-> B`.
    pub fn swapped(self) -> PathPair {
        match self {
            PathPair::AA => PathPair::BB,
            PathPair::AB => PathPair::BA,
            PathPair::BA => PathPair::AB,
            PathPair::BB => PathPair::AA,
        }
    }
}

/// The four two-photon amplitudes `ψ_nm` at a fixed emission delay `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonAmplitudes<T> {
    psi: [Complex<T>; 4],
    tau: T,
    t_xx_factored: bool,
}

impl<T: Scalar> TwoPhotonAmplitudes<T> {
    /// Amplitude of the given path pair.
    #[inline]
    pub fn psi(&self, pair: PathPair) -> Complex<T> {
        self.psi[pair.index()]
    }

    /// All four amplitudes in basis order `(AA, AB, BA, BB)`.
    #[inline]
    pub fn as_array(&self) -> &[Complex<T>; 4] {
        &self.psi
    }

    /// Emission delay `τ = t_X - t_XX`.
    pub fn tau(&self) -> T {
        self.tau
    }

    /// Whether the common biexciton-decay factor has been dropped.
    pub fn t_xx_factored(&self) -> bool {
        self.t_xx_factored
    }

    /// State norm `N = Σ_nm |ψ_nm|²`.
    pub fn norm_sq(&self) -> T {
        self.psi.iter().map(|p| p.norm_sqr()).sum()
    }

    /// Reinstates the biexciton emission-time factor `e^{-(γ_x+γ_y) t_XX / 2}`
    /// for unconditioned densities.
    pub fn with_biexciton_time(
        &self,
        t_xx: T,
        params: &PhysicalParams<T>,
    ) -> Result<TwoPhotonAmplitudes<T>> {
        if !self.t_xx_factored {
            return Err(Error::Domain(
                "biexciton time factor already applied".into(),
            ));
        }
        if t_xx < T::zero() {
            return Err(Error::Domain(format!("t_xx must be >= 0, got {t_xx}")));
        }
        let factor = (-params.rates().biexciton_total * t_xx / T::two()).exp();
        let mut psi = self.psi;
        for p in &mut psi {
            *p = p.scale(factor);
        }
        Ok(TwoPhotonAmplitudes {
            psi,
            tau: self.tau,
            t_xx_factored: false,
        })
    }
}

/// Biexciton survival amplitude `c_XX(t) = e^{-(γ_x+γ_y) t / 2}`.
///
/// Errors for `t < 0`; the system is prepared in `|XX>` at `t = 0`.
pub fn biexciton_amplitude<T: Scalar>(t: T, params: &PhysicalParams<T>) -> Result<Complex<T>> {
    if t < T::zero() {
        return Err(Error::Domain(format!(
            "biexciton amplitude defined for t >= 0, got {t}"
        )));
    }
    let rate = params.rates().biexciton_total;
    Ok(Complex::new((-rate * t / T::two()).exp(), T::zero()))
}

/// Single-photon-emitted amplitude `ψ_{α,n}(t, t_XX)`: the biexciton photon
/// went into direction `n` at `t_XX` leaving the exciton `|X_α>`, which has
/// not yet decayed at time `t`.
///
/// Zero outside the support `t < t_XX`.
pub fn exciton_amplitude<T: Scalar>(
    alpha: Polarization,
    n: Direction,
    t: T,
    t_xx: T,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> Complex<T> {
    if t < t_xx {
        return Complex::new(T::zero(), T::zero());
    }
    let rates = params.rates();
    let dt = t - t_xx;
    let decay = branch_exponent(alpha, params) * dt;
    let survival = (-rates.biexciton_total * t_xx / T::two()).exp();
    let minus_i = Complex::new(T::zero(), -T::one());
    minus_i * couplings.g(n, alpha).conj().scale(survival) * decay.exp()
}

/// Complex decay exponent per unit delay of the `α` branch:
/// `-(γ'_x + iS)/2` for `x`, `-(γ'_y - iS)/2` for `y`.
#[inline]
pub(crate) fn branch_exponent<T: Scalar>(
    alpha: Polarization,
    params: &PhysicalParams<T>,
) -> Complex<T> {
    let rates = params.rates();
    let half = T::half();
    match alpha {
        Polarization::X => Complex::new(-rates.exciton_x * half, -params.fss() * half),
        Polarization::Y => Complex::new(-rates.exciton_y * half, params.fss() * half),
    }
}

/// Evaluates the four two-photon amplitudes at delay `τ`, with the biexciton
/// emission-time factor dropped.
///
/// All four vanish for `τ < 0` (the exciton photon cannot precede the
/// biexciton photon).
pub fn two_photon_amplitudes<T: Scalar>(
    tau: T,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> TwoPhotonAmplitudes<T> {
    let zero = Complex::new(T::zero(), T::zero());
    if tau < T::zero() || !tau.is_finite() {
        return TwoPhotonAmplitudes {
            psi: [zero; 4],
            tau,
            t_xx_factored: true,
        };
    }

    let exp_x = (branch_exponent(Polarization::X, params) * tau).exp();
    let exp_y = (branch_exponent(Polarization::Y, params) * tau).exp();

    let mut psi = [zero; 4];
    for pair in PathPair::ALL {
        let n = pair.biexciton_dir();
        let m = pair.exciton_dir();
        let coeff_x = couplings.g(n, Polarization::X).conj()
            * couplings.g_prime(m, Polarization::X).conj();
        let coeff_y = couplings.g(n, Polarization::Y).conj()
            * couplings.g_prime(m, Polarization::Y).conj();
        psi[pair.index()] = -(coeff_x * exp_x + coeff_y * exp_y);
    }

    TwoPhotonAmplitudes {
        psi,
        tau,
        t_xx_factored: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::build_couplings;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    type P = PhysicalParams<f64>;

    fn system(
        eps: f64,
        fss: f64,
        phi: f64,
        phi_prime: f64,
    ) -> (P, crate::params::CouplingTable<f64>) {
        let p = P::with_all(1.0, eps, fss, phi, phi_prime, 0.0).unwrap();
        let c = build_couplings(&p).unwrap();
        (p, c)
    }

    #[test]
    fn biexciton_survival() {
        let p = P::new(1.0, 0.0, 4.0, FRAC_PI_2).unwrap();
        assert_eq!(biexciton_amplitude(0.0, &p).unwrap().re, 1.0);
        // Half-life identity: (gamma_x + gamma_y) t = 2 ln 2.
        let t_half = std::f64::consts::LN_2;
        assert_abs_diff_eq!(
            biexciton_amplitude(t_half, &p).unwrap().re,
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            biexciton_amplitude(1.0, &p).unwrap().re,
            0.36787944117144233,
            epsilon = 1e-15
        );
        assert!(biexciton_amplitude(-0.1, &p).is_err());
    }

    #[test]
    fn exciton_amplitude_support_and_modulus() {
        let (p, c) = system(0.3, 4.0, 1.0, 0.7);
        // Heaviside support.
        let before = exciton_amplitude(Polarization::X, Direction::A, 0.5, 1.0, &p, &c);
        assert_eq!(before, Complex::new(0.0, 0.0));
        // At t = t_XX the modulus squared is gamma_{alpha,n} e^{-(gx+gy) t_XX}.
        for alpha in Polarization::ALL {
            for n in Direction::ALL {
                let t_xx = 0.7;
                let at_jump = exciton_amplitude(alpha, n, t_xx, t_xx, &p, &c);
                let expected = c.channel_rate(n, alpha) * (-2.0 * t_xx).exp();
                assert_abs_diff_eq!(at_jump.norm_sqr(), expected, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn exciton_amplitude_frozen_value() {
        // eps = 0, phi = pi/2, alpha = x, n = A, t_XX = 0, t = 1, S = 4:
        // modulus sqrt(0.5) e^{-1/2}; the phase collects the gauge phase and
        // the FSS rotation on top of the constant -i emission factor,
        // arg = -pi/2 - phi - S t / 2 = -pi - 2 (wrapped: pi - 2).
        let (p, c) = system(0.0, 4.0, FRAC_PI_2, FRAC_PI_2);
        let v = exciton_amplitude(Polarization::X, Direction::A, 1.0, 0.0, &p, &c);
        assert_abs_diff_eq!(v.norm(), 0.42888194248035344, epsilon = 1e-15);
        let expected = Complex::from_polar(0.42888194248035344, std::f64::consts::PI - 2.0);
        assert_abs_diff_eq!(v.re, expected.re, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, expected.im, epsilon = 1e-15);
        assert_abs_diff_eq!(v.re, 0.17847786361539256, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.3899812467093854, epsilon = 1e-14);
    }

    #[test]
    fn two_photon_zero_before_emission() {
        let (p, c) = system(0.2, 4.0, 1.0, 1.0);
        let amps = two_photon_amplitudes(-0.5, &p, &c);
        for pair in PathPair::ALL {
            assert_eq!(amps.psi(pair), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn perfect_chirality_node_structure() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_2, FRAC_PI_2);
        // S tau = pi: same-direction pairs only.
        let amps = two_photon_amplitudes(PI / 4.0, &p, &c);
        assert!(amps.psi(PathPair::AB).norm_sqr() < 1e-30);
        assert!(amps.psi(PathPair::BA).norm_sqr() < 1e-30);
        assert!(amps.psi(PathPair::AA).norm_sqr() > 1e-3);
        assert_abs_diff_eq!(
            amps.psi(PathPair::AA).norm_sqr(),
            amps.psi(PathPair::BB).norm_sqr(),
            epsilon = 1e-15
        );
        // tau = 0: opposite-direction pairs only.
        let amps = two_photon_amplitudes(0.0, &p, &c);
        assert!(amps.psi(PathPair::AA).norm_sqr() < 1e-30);
        assert!(amps.psi(PathPair::BB).norm_sqr() < 1e-30);
        assert_abs_diff_eq!(
            amps.psi(PathPair::AB).norm_sqr(),
            amps.psi(PathPair::BA).norm_sqr(),
            epsilon = 1e-15
        );
    }

    /// Removes the global phase so two state vectors can be compared
    /// component-wise.
    fn fix_global_phase(v: &[Complex<f64>; 4]) -> [Complex<f64>; 4] {
        let pivot = v
            .iter()
            .cloned()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap();
        let rot = pivot.conj() / pivot.norm();
        [v[0] * rot, v[1] * rot, v[2] * rot, v[3] * rot]
    }

    #[test]
    fn normalized_state_matches_perfect_chirality_form() {
        // Against (cos(S tau/2)(|AB>+|BA>) + i sin(S tau/2)(|AA>+|BB>))/sqrt(2).
        let (p, c) = system(0.0, 4.0, FRAC_PI_2, FRAC_PI_2);
        for &tau in &[0.0, 0.13, 0.5, PI / 4.0, 1.9] {
            let amps = two_photon_amplitudes(tau, &p, &c);
            let n = amps.norm_sq().sqrt();
            let normalized = [
                amps.psi(PathPair::AA) / n,
                amps.psi(PathPair::AB) / n,
                amps.psi(PathPair::BA) / n,
                amps.psi(PathPair::BB) / n,
            ];
            let half_angle = 4.0 * tau / 2.0;
            let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
            let reference = [
                Complex::new(0.0, half_angle.sin() * inv_sqrt2),
                Complex::new(half_angle.cos() * inv_sqrt2, 0.0),
                Complex::new(half_angle.cos() * inv_sqrt2, 0.0),
                Complex::new(0.0, half_angle.sin() * inv_sqrt2),
            ];
            let got = fix_global_phase(&normalized);
            let want = fix_global_phase(&reference);
            for i in 0..4 {
                assert_abs_diff_eq!(got[i].re, want[i].re, epsilon = 1e-12);
                assert_abs_diff_eq!(got[i].im, want[i].im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn nonchiral_state_is_uniform() {
        let (p, c) = system(0.0, 4.0, 0.0, 0.0);
        for &tau in &[0.0, 0.31, 1.0] {
            let amps = two_photon_amplitudes(tau, &p, &c);
            let n = amps.norm_sq().sqrt();
            let first = amps.psi(PathPair::AA);
            for pair in PathPair::ALL {
                // All four normalised amplitudes equal (modulus 1/2, common phase).
                let a = amps.psi(pair);
                assert_eq!(a, first);
                assert_abs_diff_eq!(a.norm() / n, 0.5, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn biexciton_time_factor_reinstated() {
        let (p, c) = system(0.1, 4.0, 1.0, 1.0);
        let amps = two_photon_amplitudes(0.8, &p, &c);
        let full = amps.with_biexciton_time(0.5, &p).unwrap();
        assert!(!full.t_xx_factored());
        let factor = (-2.0 * 0.5 / 2.0f64).exp();
        assert_abs_diff_eq!(
            full.norm_sq(),
            amps.norm_sq() * factor * factor,
            epsilon = 1e-15
        );
        assert!(full.with_biexciton_time(0.5, &p).is_err());
    }

    proptest! {
        /// Direction-local gauge shifts leave every |psi_nm|^2 unchanged.
        #[test]
        fn gauge_shift_invariance(
            eps in -0.9f64..0.9,
            fss in 0.0f64..8.0,
            phi in 0.0f64..PI,
            tau in 0.0f64..8.0,
            delta_a in -PI..PI,
            delta_b in -PI..PI,
            delta_pa in -PI..PI,
            delta_pb in -PI..PI,
        ) {
            let (p, c) = system(eps, fss, phi, phi);
            let shifted = c
                .shift_gauge(Direction::A, delta_a, delta_pa)
                .shift_gauge(Direction::B, delta_b, delta_pb);
            let base = two_photon_amplitudes(tau, &p, &c);
            let moved = two_photon_amplitudes(tau, &p, &shifted);
            for pair in PathPair::ALL {
                let d = (base.psi(pair).norm_sqr() - moved.psi(pair).norm_sqr()).abs();
                prop_assert!(d <= 1e-14 * (1.0 + base.psi(pair).norm_sqr()));
            }
        }

        /// A <-> B relabelling is equivalent to flipping the chiral phases.
        #[test]
        fn exchange_symmetry(
            eps in -0.9f64..0.9,
            fss in 0.0f64..8.0,
            phi in 0.0f64..PI,
            phi_prime in 0.0f64..PI,
            tau in 0.0f64..8.0,
        ) {
            let (p, c) = system(eps, fss, phi, phi_prime);
            let p_flip = P::with_all(1.0, eps, fss, -phi, -phi_prime, 0.0).unwrap();
            let c_flip = build_couplings(&p_flip).unwrap();
            let base = two_photon_amplitudes(tau, &p, &c);
            let flip = two_photon_amplitudes(tau, &p_flip, &c_flip);
            for pair in PathPair::ALL {
                let a = base.psi(pair);
                let b = flip.psi(pair.swapped());
                prop_assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
            }
        }
    }
}

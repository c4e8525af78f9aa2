//! Path-resolved coincidence probability densities `P_nm(τ)`.
//!
//! Two density conventions appear, differing by the constant `γ_x + γ_y`:
//!
//! * [`coincidence_general`] returns `|ψ_nm(τ)|²` with the biexciton
//!   emission-time factor dropped — the squared modulus of the two-photon
//!   amplitudes, written out as decaying exponentials plus an interference
//!   cosine at the fine-structure frequency.
//! * [`coincidence_symmetric`] (and [`conditional_density`]) divide by
//!   `γ_x + γ_y = 2 γ_X`, i.e. they are conditioned on the first photon so
//!   that `Σ_nm ∫ P_nm dτ ≈ 1` (up to the `Γ = 0` normalisation deviation).
//!   This is the convention the figures use.
//!
//! The two are related by exactly `first_photon_density` integrated over the
//! first emission time, `∫ (γ_x+γ_y) e^{-(γ_x+γ_y) t_XX} dt_XX / (γ_x+γ_y)`.

use crate::amplitudes::PathPair;
use crate::params::{CouplingTable, PhysicalParams, Polarization};
use crate::scalar::Scalar;

/// The four coincidence densities at one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceRecord<T> {
    tau: T,
    p: [T; 4],
    conditioned: bool,
}

impl<T: Scalar> CoincidenceRecord<T> {
    /// Density of the given path pair.
    #[inline]
    pub fn p(&self, pair: PathPair) -> T {
        self.p[pair.index()]
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Whether the record is conditioned on the first photon (divided by
    /// `γ_x + γ_y`).
    pub fn conditioned(&self) -> bool {
        self.conditioned
    }

    /// Sum over the four path pairs.
    pub fn total(&self) -> T {
        self.p.iter().cloned().sum()
    }

    /// Rescales all four densities by a constant.
    pub fn scaled(&self, factor: T) -> Self {
        let mut p = self.p;
        for v in &mut p {
            *v *= factor;
        }
        CoincidenceRecord { p, ..*self }
    }
}

/// General-rate coincidence density
/// `P_nm(τ) = |ψ_nm(τ)|²` (biexciton time factored out):
///
/// ```text
/// P_nm = γ_{x,n} γ'_{x,m} e^{-γ'_x τ} + γ_{y,n} γ'_{y,m} e^{-γ'_y τ}
///      + 2 √(γ_{x,n} γ_{y,n} γ'_{x,m} γ'_{y,m}) e^{-(γ'_x+γ'_y)τ/2}
///        cos(Sτ + (φ_{x,n}-φ_{y,n}) + (φ'_{x,m}-φ'_{y,m}))
/// ```
pub fn coincidence_general<T: Scalar>(
    tau: T,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> CoincidenceRecord<T> {
    let zero = T::zero();
    if tau < zero {
        return CoincidenceRecord {
            tau,
            p: [zero; 4],
            conditioned: false,
        };
    }

    let rates = params.rates();
    let exp_x = (-rates.exciton_x * tau).exp();
    let exp_y = (-rates.exciton_y * tau).exp();
    let exp_mean = (-(rates.exciton_x + rates.exciton_y) * tau / T::two()).exp();

    let mut p = [zero; 4];
    for pair in PathPair::ALL {
        let n = pair.biexciton_dir();
        let m = pair.exciton_dir();
        let gxn = couplings.channel_rate(n, Polarization::X);
        let gyn = couplings.channel_rate(n, Polarization::Y);
        let gpxm = couplings.channel_rate_prime(m, Polarization::X);
        let gpym = couplings.channel_rate_prime(m, Polarization::Y);
        let phase = params.fss() * tau
            + (couplings.phase(n, Polarization::X) - couplings.phase(n, Polarization::Y))
            + (couplings.phase_prime(m, Polarization::X)
                - couplings.phase_prime(m, Polarization::Y));
        p[pair.index()] = gxn * gpxm * exp_x
            + gyn * gpym * exp_y
            + T::two() * (gxn * gyn * gpxm * gpym).sqrt() * exp_mean * phase.cos();
    }

    CoincidenceRecord {
        tau,
        p,
        conditioned: false,
    }
}

/// Conditional coincidence densities `|ψ_nm|² / (γ_x + γ_y)`, which integrate
/// to (approximately) one over delays and path pairs. Valid for any `ε`, `Φ'`.
pub fn conditional_density<T: Scalar>(
    tau: T,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> CoincidenceRecord<T> {
    let rec = coincidence_general(tau, params, couplings);
    let mut scaled = rec.scaled(T::one() / params.rates().biexciton_total);
    scaled.conditioned = true;
    scaled
}

/// Symmetric-decay closed form (`ε = 0`, `Φ' = Φ`), conditioned on the first
/// photon:
///
/// ```text
/// P_AA = (γ_X/4) e^{-γ_X τ} (1 + cos(Sτ + 2Φ))
/// P_BB = (γ_X/4) e^{-γ_X τ} (1 + cos(Sτ - 2Φ))
/// P_AB = P_BA = (γ_X/4) e^{-γ_X τ} (1 + cos(Sτ))
/// ```
pub fn coincidence_symmetric<T: Scalar>(tau: T, gamma_x: T, fss: T, phi: T) -> CoincidenceRecord<T> {
    let zero = T::zero();
    if tau < zero {
        return CoincidenceRecord {
            tau,
            p: [zero; 4],
            conditioned: true,
        };
    }
    let envelope = gamma_x / T::lit(4.0) * (-gamma_x * tau).exp();
    let s_tau = fss * tau;
    let two_phi = T::two() * phi;
    let cross = envelope * (T::one() + s_tau.cos());
    CoincidenceRecord {
        tau,
        p: [
            envelope * (T::one() + (s_tau + two_phi).cos()),
            cross,
            cross,
            envelope * (T::one() + (s_tau - two_phi).cos()),
        ],
        conditioned: true,
    }
}

/// Probability density of detecting the first (biexciton) photon at `t_XX`:
/// `(γ_x + γ_y) e^{-(γ_x+γ_y) t_XX} = 2 γ_X e^{-2 γ_X t_XX}`.
pub fn first_photon_density<T: Scalar>(t_xx: T, params: &PhysicalParams<T>) -> T {
    if t_xx < T::zero() {
        return T::zero();
    }
    let rate = params.rates().biexciton_total;
    rate * (-rate * t_xx).exp()
}

/// State-norm density `N(τ) = Σ_nm |ψ_nm(τ)|²` (biexciton time factored out).
pub fn state_norm_density<T: Scalar>(
    tau: T,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> T {
    coincidence_general(tau, params, couplings).total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitudes::two_photon_amplitudes;
    use crate::params::build_couplings;
    use crate::quad::GaussLegendre;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    type P = PhysicalParams<f64>;

    #[test]
    fn symmetric_closed_form_values() {
        // Phi = pi/2, tau = 0: P_AA = 0 exactly, P_AB = gamma_X / 2.
        let rec = coincidence_symmetric(0.0, 1.0, 4.0, FRAC_PI_2);
        assert_eq!(rec.p(PathPair::AA), 0.0);
        assert_abs_diff_eq!(rec.p(PathPair::AB), 0.5, epsilon = 1e-15);
        assert_eq!(rec.p(PathPair::AB), rec.p(PathPair::BA));
    }

    #[test]
    fn general_matches_symmetric_up_to_conditioning() {
        let p = P::new(1.0, 0.0, 4.0, FRAC_PI_3).unwrap();
        let c = build_couplings(&p).unwrap();
        for &tau in &[0.0, 0.2, 0.9, 3.3] {
            let general = conditional_density(tau, &p, &c);
            let symmetric = coincidence_symmetric(tau, 1.0, 4.0, FRAC_PI_3);
            for pair in PathPair::ALL {
                assert_abs_diff_eq!(general.p(pair), symmetric.p(pair), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn same_side_suppressed_for_chiral_zero_fss() {
        let p = P::new(1.0, 0.0, 0.0, FRAC_PI_2).unwrap();
        let c = build_couplings(&p).unwrap();
        for &tau in &[0.0, 0.5, 2.0] {
            let rec = coincidence_general(tau, &p, &c);
            assert!(rec.p(PathPair::AA).abs() < 1e-15);
            assert!(rec.p(PathPair::BB).abs() < 1e-15);
            assert!(rec.p(PathPair::AB) > 0.0);
        }
    }

    #[test]
    fn symmetric_sum_is_the_norm_density() {
        // P_AA + P_AB + P_BA + P_BB = gamma_X e^{-gamma_X tau}(1 + cos(S tau) cos^2 Phi),
        // the trig identity cos(a+b) + cos(a-b) = 2 cos a cos b in disguise.
        for &(phi, s) in &[(0.4, 4.0), (FRAC_PI_3, 2.0), (FRAC_PI_2, 4.0)] {
            for &tau in &[0.0, 0.3, 1.1, 4.2] {
                let total = coincidence_symmetric(tau, 1.0, s, phi).total();
                let expected = (-tau).exp() * (1.0 + (s * tau).cos() * phi.cos().powi(2));
                assert_abs_diff_eq!(total, expected, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn first_photon_density_normalised() {
        let p = P::new(1.0, 0.4, 4.0, 0.3).unwrap();
        assert_abs_diff_eq!(first_photon_density(0.0, &p), 2.0, epsilon = 1e-15);
        // epsilon cancels in the total rate.
        let p0 = P::new(1.0, 0.0, 4.0, 0.3).unwrap();
        assert_eq!(
            first_photon_density(0.7, &p),
            first_photon_density(0.7, &p0)
        );
        let rule = GaussLegendre::new(8);
        let total = rule.integrate_composite(0.0, 30.0, 256, |t| first_photon_density(t, &p));
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn conditional_total_integrates_to_norm_prediction() {
        // int sum P dt = 1 + cos(Phi) cos(Phi') gamma^2/(gamma^2+S^2) at eps=0.
        for &(phi, s) in &[(0.0, 4.0), (FRAC_PI_3, 4.0), (FRAC_PI_2, 2.0), (1.0, 0.7)] {
            let p = P::new(1.0, 0.0, s, phi).unwrap();
            let c = build_couplings(&p).unwrap();
            let rule = GaussLegendre::new(8);
            let panels = 16 * (1.0 + 40.0 * s.max(1.0) / PI).ceil() as usize;
            let total =
                rule.integrate_composite(0.0, 40.0, panels, |t| conditional_density(t, &p, &c).total());
            let expected = 1.0 + phi.cos().powi(2) / (1.0 + s * s);
            assert_abs_diff_eq!(total, expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn peak_offset_between_same_side_densities() {
        // At Phi = pi/3, S = 4 the AA and BB maxima sit 4 Phi / S apart
        // (modulo the FSS period).
        let (phi, s) = (FRAC_PI_3, 4.0);
        let n = 1200;
        let mut best_aa = (0usize, f64::MIN);
        let mut best_bb = (0usize, f64::MIN);
        for i in 0..n {
            let tau = 6.0 * i as f64 / (n - 1) as f64;
            let rec = coincidence_symmetric(tau, 1.0, s, phi);
            if rec.p(PathPair::AA) > best_aa.1 {
                best_aa = (i, rec.p(PathPair::AA));
            }
            if rec.p(PathPair::BB) > best_bb.1 {
                best_bb = (i, rec.p(PathPair::BB));
            }
        }
        let step = 6.0 / (n - 1) as f64;
        let period = 2.0 * PI / s;
        let offset = (best_bb.0 as f64 - best_aa.0 as f64) * step;
        let target = 4.0 * phi / s;
        let wrapped = (offset - target).rem_euclid(period);
        let dist = wrapped.min(period - wrapped);
        assert!(dist <= step + 1e-12, "offset {offset}, target {target}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        /// The cosine closed form is the modulus squared of the amplitudes.
        #[test]
        fn matches_amplitudes_modulus_squared(
            eps in -0.9f64..0.9,
            fss in 0.0f64..8.0,
            phi in 0.0f64..PI,
            phi_prime in 0.0f64..PI,
            tau in 0.0f64..8.0,
        ) {
            let p = P::with_all(1.0, eps, fss, phi, phi_prime, 0.0).unwrap();
            let c = build_couplings(&p).unwrap();
            let rec = coincidence_general(tau, &p, &c);
            let amps = two_photon_amplitudes(tau, &p, &c);
            for pair in PathPair::ALL {
                let expect = amps.psi(pair).norm_sqr();
                let got = rec.p(pair);
                prop_assert!((got - expect).abs() <= 1e-12 * expect.max(1e-3));
            }
        }

        /// Densities are nonnegative, AB = BA at eps = 0, and bounded by the
        /// decay envelope.
        #[test]
        fn density_bounds(
            fss in 0.0f64..8.0,
            phi in 0.0f64..PI,
            tau in 0.0f64..8.0,
        ) {
            let p = P::new(1.0, 0.0, fss, phi).unwrap();
            let c = build_couplings(&p).unwrap();
            let rec = conditional_density(tau, &p, &c);
            let envelope = (-tau).exp();
            for pair in PathPair::ALL {
                prop_assert!(rec.p(pair) >= -1e-15);
                prop_assert!(rec.p(pair) <= 0.5 * envelope + 1e-12);
            }
            prop_assert!((rec.p(PathPair::AB) - rec.p(PathPair::BA)).abs() < 1e-15);
        }
    }
}

//! Physical parameters of the cascade and their derived quantities.
//!
//! The exciton decay rate `γ_X` sets the unit scale; every other rate and
//! frequency is most naturally quoted in units of `γ_X`, and times in
//! `1/γ_X`. The biexciton decays twice as fast, `γ_XX = 2 γ_X`, because its
//! dipole matrix elements are larger by `√2`.
//!
//! Decay-rate asymmetry between the `x`- and `y`-polarised channels is
//! parameterised by `ε = (γ_x - γ_y)/(γ_x + γ_y)`, applied identically to the
//! biexciton and exciton transitions (both stem from the same local field
//! components):
//!
//! ```text
//! γ_x  = (1 + ε) γ_XX / 2      γ_y  = (1 - ε) γ_XX / 2
//! γ'_x = (1 + ε) γ_X           γ'_y = (1 - ε) γ_X
//! ```
//!
//! Chirality enters only through the phase differences between the `x` and
//! `y` components of the local waveguide field, `Φ` (biexciton transition)
//! and `Φ'` (exciton transition). Individual coupling phases are gauge; we
//! pin `φ_{A,y} = φ_{B,y} = 0`, `φ_{A,x} = Φ`, `φ_{B,x} = -Φ` (primed
//! analogues with `Φ'`) so intermediate complex amplitudes are reproducible.
//! Physical observables only ever see the differences.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Waveguide propagation direction of an emitted photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Left-propagating path.
    A = 0,
    /// Right-propagating path.
    B = 1,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::A, Direction::B];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Linear dipole polarisation of a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    X = 0,
    Y = 1,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::X, Polarization::Y];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Full parameter set of a simulation run; immutable once constructed and the
/// single source of truth for everything derived downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    gamma_x: T,
    epsilon: T,
    fss: T,
    phi: T,
    phi_prime: T,
    cross_gamma: T,
}

/// Serialisable form of [`PhysicalParams`]; the on-disk config block.
///
/// Missing optional keys fall back to the standard defaults
/// (`γ_X = 1`, `ε = 0`, `S = 4`, `Φ = Φ' = π/2`, `Γ = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    /// Exciton decay rate `γ_X` (unit scale).
    pub gamma_x_exciton: Option<f64>,
    /// Decay asymmetry `ε`.
    pub epsilon: Option<f64>,
    /// Fine-structure splitting `S`.
    pub fss: Option<f64>,
    /// Biexciton chiral phase `Φ`.
    pub phi: Option<f64>,
    /// Exciton chiral phase `Φ'`; defaults to `phi`.
    pub phi_prime: Option<f64>,
    /// Exciton cross-coupling rate `Γ`.
    pub cross_gamma: Option<f64>,
}

impl<T: Scalar> Default for PhysicalParams<T> {
    /// Standard operating point: `γ_X = 1`, symmetric decay, `S = 4 γ_X`,
    /// perfect chirality, no cross-coupling.
    fn default() -> Self {
        Self {
            gamma_x: T::one(),
            epsilon: T::zero(),
            fss: T::lit(4.0),
            phi: T::FRAC_PI_2(),
            phi_prime: T::FRAC_PI_2(),
            cross_gamma: T::zero(),
        }
    }
}

impl<T: Scalar> PhysicalParams<T> {
    /// Builds a validated parameter set with `Φ' = Φ` and `Γ = 0`.
    pub fn new(gamma_x: T, epsilon: T, fss: T, phi: T) -> Result<Self> {
        Self::with_all(gamma_x, epsilon, fss, phi, phi, T::zero())
    }

    /// Builds a validated parameter set with every field explicit.
    pub fn with_all(
        gamma_x: T,
        epsilon: T,
        fss: T,
        phi: T,
        phi_prime: T,
        cross_gamma: T,
    ) -> Result<Self> {
        let p = Self {
            gamma_x,
            epsilon,
            fss,
            phi,
            phi_prime,
            cross_gamma,
        };
        p.validate()?;
        Ok(p)
    }

    /// Resolves a config block against the standard defaults.
    pub fn from_config(cfg: &ParamsConfig) -> Result<Self> {
        let gamma_x = cfg.gamma_x_exciton.map_or_else(T::one, T::lit);
        let epsilon = cfg.epsilon.map_or_else(T::zero, T::lit);
        let fss = cfg.fss.map_or_else(|| T::lit(4.0), T::lit);
        let phi = cfg.phi.map_or_else(T::FRAC_PI_2, T::lit);
        let phi_prime = cfg.phi_prime.map_or(phi, T::lit);
        let cross_gamma = cfg.cross_gamma.map_or_else(T::zero, T::lit);
        Self::with_all(gamma_x, epsilon, fss, phi, phi_prime, cross_gamma)
    }

    /// Serialisable view of the resolved parameters.
    pub fn to_config(&self) -> ParamsConfig
    where
        T: Into<f64>,
    {
        ParamsConfig {
            gamma_x_exciton: Some(self.gamma_x.into()),
            epsilon: Some(self.epsilon.into()),
            fss: Some(self.fss.into()),
            phi: Some(self.phi.into()),
            phi_prime: Some(self.phi_prime.into()),
            cross_gamma: Some(self.cross_gamma.into()),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = self.gamma_x.is_finite()
            && self.epsilon.is_finite()
            && self.fss.is_finite()
            && self.phi.is_finite()
            && self.phi_prime.is_finite()
            && self.cross_gamma.is_finite();
        if !finite {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        if self.gamma_x <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "gamma_x must be positive, got {}",
                self.gamma_x
            )));
        }
        if self.epsilon.abs() >= T::one() {
            return Err(Error::InvalidParameter(format!(
                "|epsilon| must be < 1, got {}",
                self.epsilon
            )));
        }
        if self.fss < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "fss must be >= 0, got {}",
                self.fss
            )));
        }
        if self.cross_gamma < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "cross_gamma must be >= 0, got {}",
                self.cross_gamma
            )));
        }
        Ok(())
    }

    /// Exciton decay rate `γ_X` (the unit scale).
    pub fn gamma_x(&self) -> T {
        self.gamma_x
    }

    /// Decay asymmetry `ε ∈ (-1, 1)`.
    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// Fine-structure splitting `S`.
    pub fn fss(&self) -> T {
        self.fss
    }

    /// Biexciton chiral phase `Φ`.
    pub fn phi(&self) -> T {
        self.phi
    }

    /// Exciton chiral phase `Φ'`.
    pub fn phi_prime(&self) -> T {
        self.phi_prime
    }

    /// Exciton cross-coupling rate `Γ`.
    pub fn cross_gamma(&self) -> T {
        self.cross_gamma
    }

    /// Per-channel decay rates derived from `(γ_X, ε)`.
    pub fn rates(&self) -> DerivedRates<T> {
        let gamma_xx = T::two() * self.gamma_x;
        let plus = T::one() + self.epsilon;
        let minus = T::one() - self.epsilon;
        DerivedRates {
            biexciton_x: plus * gamma_xx / T::two(),
            biexciton_y: minus * gamma_xx / T::two(),
            exciton_x: plus * self.gamma_x,
            exciton_y: minus * self.gamma_x,
            biexciton_total: gamma_xx,
        }
    }
}

/// Channel-resolved spontaneous emission rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRates<T> {
    /// Biexciton decay through the `x` dipole, `γ_x`.
    pub biexciton_x: T,
    /// Biexciton decay through the `y` dipole, `γ_y`.
    pub biexciton_y: T,
    /// Exciton decay through the `x` dipole, `γ'_x`.
    pub exciton_x: T,
    /// Exciton decay through the `y` dipole, `γ'_y`.
    pub exciton_y: T,
    /// Total biexciton decay rate `γ_XX = γ_x + γ_y = 2 γ_X`.
    pub biexciton_total: T,
}

impl<T: Scalar> DerivedRates<T> {
    /// Biexciton rate of the given polarisation channel.
    pub fn biexciton(&self, alpha: Polarization) -> T {
        match alpha {
            Polarization::X => self.biexciton_x,
            Polarization::Y => self.biexciton_y,
        }
    }

    /// Exciton rate of the given polarisation channel.
    pub fn exciton(&self, alpha: Polarization) -> T {
        match alpha {
            Polarization::X => self.exciton_x,
            Polarization::Y => self.exciton_y,
        }
    }

    /// Mean exciton rate `(γ'_x + γ'_y)/2 = γ_X`.
    pub fn exciton_mean(&self) -> T {
        (self.exciton_x + self.exciton_y) / T::two()
    }

    /// Recovers the asymmetry `ε = (γ_x - γ_y)/(γ_x + γ_y)`.
    pub fn asymmetry(&self) -> T {
        (self.biexciton_x - self.biexciton_y) / (self.biexciton_x + self.biexciton_y)
    }
}

/// Derives the per-channel rates, validating the parameters first.
pub fn derive_rates<T: Scalar>(params: &PhysicalParams<T>) -> Result<DerivedRates<T>> {
    params.validate()?;
    Ok(params.rates())
}

/// Complex coupling constants `g_{n,α}` (biexciton transition) and `g'_{n,α}`
/// (exciton transition) for each direction `n` and polarisation `α`, in the
/// fixed gauge described in the module docs.
///
/// Magnitudes satisfy `|g_{A,α}| = |g_{B,α}|` (linear dipoles couple equally
/// in both directions) and `Σ_n |g_{n,α}|² = γ_α`, with the primed analogue
/// for the exciton rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTable<T> {
    g: [[Complex<T>; 2]; 2],
    g_prime: [[Complex<T>; 2]; 2],
}

impl<T: Scalar> CouplingTable<T> {
    /// Biexciton-transition coupling `g_{n,α}`.
    pub fn g(&self, n: Direction, alpha: Polarization) -> Complex<T> {
        self.g[n.index()][alpha.index()]
    }

    /// Exciton-transition coupling `g'_{n,α}`.
    pub fn g_prime(&self, n: Direction, alpha: Polarization) -> Complex<T> {
        self.g_prime[n.index()][alpha.index()]
    }

    /// Channel rate `γ_{α,n} = |g_{n,α}|²`.
    pub fn channel_rate(&self, n: Direction, alpha: Polarization) -> T {
        self.g(n, alpha).norm_sqr()
    }

    /// Channel rate `γ'_{α,n} = |g'_{n,α}|²`.
    pub fn channel_rate_prime(&self, n: Direction, alpha: Polarization) -> T {
        self.g_prime(n, alpha).norm_sqr()
    }

    /// Coupling phase `φ_{n,α} = arg g_{n,α}`.
    pub fn phase(&self, n: Direction, alpha: Polarization) -> T {
        self.g(n, alpha).arg()
    }

    /// Coupling phase `φ'_{n,α} = arg g'_{n,α}`.
    pub fn phase_prime(&self, n: Direction, alpha: Polarization) -> T {
        self.g_prime(n, alpha).arg()
    }

    /// Applies a direction-local gauge shift: every `φ_{n,α}` of direction `n`
    /// moves by `delta` and every `φ'_{n,α}` by `delta_prime`.
    ///
    /// Gauge shifts multiply each two-photon amplitude by a global phase per
    /// path pair and therefore leave all `|ψ_nm|²` unchanged.
    pub fn shift_gauge(&self, n: Direction, delta: T, delta_prime: T) -> Self {
        let mut out = *self;
        let rot = Complex::from_polar(T::one(), delta);
        let rot_prime = Complex::from_polar(T::one(), delta_prime);
        for alpha in 0..2 {
            out.g[n.index()][alpha] = out.g[n.index()][alpha] * rot;
            out.g_prime[n.index()][alpha] = out.g_prime[n.index()][alpha] * rot_prime;
        }
        out
    }
}

/// Builds the gauge-fixed coupling table from the parameters.
///
/// Each direction carries half of the channel rate, `|g_{n,α}|² = γ_α / 2`,
/// and the phases are `φ_{A,x} = Φ`, `φ_{B,x} = -Φ`, `φ_{n,y} = 0` (primed
/// with `Φ'`).
pub fn build_couplings<T: Scalar>(params: &PhysicalParams<T>) -> Result<CouplingTable<T>> {
    let rates = derive_rates(params)?;
    let half = T::half();

    let mag = |rate: T| (rate * half).sqrt();
    let g_x = mag(rates.biexciton_x);
    let g_y = mag(rates.biexciton_y);
    let gp_x = mag(rates.exciton_x);
    let gp_y = mag(rates.exciton_y);

    let phase = |m: T, phi: T| Complex::from_polar(m, phi);
    Ok(CouplingTable {
        g: [
            [phase(g_x, params.phi()), phase(g_y, T::zero())],
            [phase(g_x, -params.phi()), phase(g_y, T::zero())],
        ],
        g_prime: [
            [phase(gp_x, params.phi_prime()), phase(gp_y, T::zero())],
            [phase(gp_x, -params.phi_prime()), phase(gp_y, T::zero())],
        ],
    })
}

/// A modelling-regime caveat raised by [`validate_regime`].
#[derive(Debug, Clone, PartialEq)]
pub enum RegimeWarning {
    /// `S` is small compared to the decay rates while `Γ = 0` is assumed; the
    /// emitted state is not exactly normalised and the predicted deviation is
    /// no longer negligible.
    SmallFssNormalization { predicted_deviation: f64 },
    /// With `S = 0` the `Γ = 0` model only represents perfect chirality;
    /// conclusions for `Φ ≠ π/2` are unreliable.
    ZeroFssImperfectChirality { phi: f64 },
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeWarning::SmallFssNormalization {
                predicted_deviation,
            } => write!(
                f,
                "S < 2*gamma_X with Gamma = 0: state norm deviates by ~{predicted_deviation:.3}",
            ),
            RegimeWarning::ZeroFssImperfectChirality { phi } => write!(
                f,
                "S = 0 with phi = {phi:.4} != pi/2: Gamma = 0 model is only accurate for perfect chirality",
            ),
        }
    }
}

/// Outcome of the regime validation: warnings plus the predicted deviation of
/// the total two-photon detection probability from unity,
/// `(1 - ε²) cos Φ cos Φ' · γ_X² / (γ_X² + S²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport<T> {
    pub warnings: Vec<RegimeWarning>,
    pub predicted_norm_deviation: T,
}

/// Checks the assumptions behind the closed-form (`Γ = 0`) solution.
pub fn validate_regime<T: Scalar>(params: &PhysicalParams<T>) -> RegimeReport<T> {
    let g = params.gamma_x();
    let s = params.fss();
    let deviation = (T::one() - params.epsilon() * params.epsilon())
        * params.phi().cos()
        * params.phi_prime().cos()
        * g
        * g
        / (g * g + s * s);
    let deviation_abs = deviation.abs();

    let mut warnings = Vec::new();
    let negligible = T::lit(1e-12);
    if s < T::two() * g && params.cross_gamma() == T::zero() && deviation_abs > negligible {
        warnings.push(RegimeWarning::SmallFssNormalization {
            predicted_deviation: deviation_abs.to_f64().unwrap_or(f64::NAN),
        });
    }
    if s == T::zero() && (params.phi() - T::FRAC_PI_2()).abs() > negligible {
        warnings.push(RegimeWarning::ZeroFssImperfectChirality {
            phi: params.phi().to_f64().unwrap_or(f64::NAN),
        });
    }

    RegimeReport {
        warnings,
        predicted_norm_deviation: deviation_abs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    type P = PhysicalParams<f64>;

    #[test]
    fn symmetric_rates() {
        let p = P::new(1.0, 0.0, 4.0, 0.3).unwrap();
        let r = derive_rates(&p).unwrap();
        assert_eq!(r.biexciton_x, 1.0);
        assert_eq!(r.biexciton_y, 1.0);
        assert_eq!(r.exciton_x, 1.0);
        assert_eq!(r.exciton_y, 1.0);
        assert_eq!(r.biexciton_total, 2.0);
    }

    #[test]
    fn asymmetric_rates() {
        let p = P::new(1.0, -0.4, 4.0, 0.0).unwrap();
        let r = derive_rates(&p).unwrap();
        assert_abs_diff_eq!(r.biexciton_x, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(r.biexciton_y, 1.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.exciton_x, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(r.exciton_y, 1.4, epsilon = 1e-15);
        // The asymmetry parameterisation inverts to machine precision.
        assert_abs_diff_eq!(r.asymmetry(), -0.4, epsilon = 2.0 * f64::EPSILON);
    }

    #[test]
    fn epsilon_boundary_rejected() {
        assert!(matches!(
            P::new(1.0, 1.0, 4.0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            P::new(1.0, -1.0, 4.0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(P::new(1.0, 0.999999, 4.0, 0.0).is_ok());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(P::new(0.0, 0.0, 4.0, 0.0).is_err());
        assert!(P::new(-1.0, 0.0, 4.0, 0.0).is_err());
        assert!(P::new(1.0, 0.0, -0.1, 0.0).is_err());
        assert!(P::with_all(1.0, 0.0, 4.0, 0.0, 0.0, -0.5).is_err());
        assert!(P::new(f64::NAN, 0.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn gauge_fixed_couplings() {
        let p = P::new(1.0, 0.0, 4.0, std::f64::consts::FRAC_PI_2).unwrap();
        let c = build_couplings(&p).unwrap();
        for n in Direction::ALL {
            for alpha in Polarization::ALL {
                assert_abs_diff_eq!(c.channel_rate(n, alpha), 0.5, epsilon = 1e-15);
                assert_abs_diff_eq!(c.channel_rate_prime(n, alpha), 0.5, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(
            c.phase(Direction::A, Polarization::X),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            c.phase(Direction::B, Polarization::X),
            -std::f64::consts::FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_eq!(c.phase(Direction::A, Polarization::Y), 0.0);
        assert_eq!(c.phase(Direction::B, Polarization::Y), 0.0);
    }

    #[test]
    fn nonchiral_gauge_has_zero_phases() {
        let p = P::new(1.0, 0.0, 4.0, 0.0).unwrap();
        let c = build_couplings(&p).unwrap();
        for n in Direction::ALL {
            for alpha in Polarization::ALL {
                assert_eq!(c.phase(n, alpha), 0.0);
                assert_eq!(c.phase_prime(n, alpha), 0.0);
            }
        }
    }

    #[test]
    fn regime_deviation_examples() {
        // S = 4, phi = 0: deviation 1/17, no zero-FSS warning.
        let p = P::new(1.0, 0.0, 4.0, 0.0).unwrap();
        let report = validate_regime(&p);
        assert_abs_diff_eq!(report.predicted_norm_deviation, 1.0 / 17.0, epsilon = 1e-15);
        assert!(!report
            .warnings
            .iter()
            .any(|w| matches!(w, RegimeWarning::ZeroFssImperfectChirality { .. })));

        // S = 0, phi = pi/4: model-validity warning.
        let p = P::new(1.0, 0.0, 0.0, std::f64::consts::FRAC_PI_4).unwrap();
        let report = validate_regime(&p);
        assert!(report
            .warnings
            .iter()
            .any(|w| matches!(w, RegimeWarning::ZeroFssImperfectChirality { .. })));

        // S = 0, phi = pi/2: perfectly chiral, no warnings, zero deviation.
        let p = P::new(1.0, 0.0, 0.0, std::f64::consts::FRAC_PI_2).unwrap();
        let report = validate_regime(&p);
        assert!(report.warnings.is_empty());
        assert!(report.predicted_norm_deviation < 1e-12);
    }

    #[test]
    fn config_roundtrip_and_defaults() {
        let toml_block = r#"
            gamma_x_exciton = 2.0
            epsilon = -0.4
            fss = 3.0
            phi = 1.0
        "#;
        let cfg: ParamsConfig = toml::from_str(toml_block).unwrap();
        let p = P::from_config(&cfg).unwrap();
        assert_eq!(p.gamma_x(), 2.0);
        assert_eq!(p.epsilon(), -0.4);
        assert_eq!(p.fss(), 3.0);
        assert_eq!(p.phi(), 1.0);
        // phi_prime defaults to phi, cross_gamma to zero.
        assert_eq!(p.phi_prime(), 1.0);
        assert_eq!(p.cross_gamma(), 0.0);

        let json_block = r#"{"fss": 0.5}"#;
        let cfg: ParamsConfig = serde_json::from_str(json_block).unwrap();
        let p = P::from_config(&cfg).unwrap();
        assert_eq!(p.gamma_x(), 1.0);
        assert_eq!(p.fss(), 0.5);
        assert_eq!(p.phi(), std::f64::consts::FRAC_PI_2);

        let unknown = toml::from_str::<ParamsConfig>("gamma = 1.0");
        assert!(unknown.is_err());
    }

    proptest! {
        #[test]
        fn coupling_invariants_hold(
            gamma_x in 0.2f64..5.0,
            epsilon in -0.95f64..0.95,
            fss in 0.0f64..10.0,
            phi in 0.0f64..std::f64::consts::PI,
            phi_prime in 0.0f64..std::f64::consts::PI,
        ) {
            let p = P::with_all(gamma_x, epsilon, fss, phi, phi_prime, 0.0).unwrap();
            let r = derive_rates(&p).unwrap();
            let c = build_couplings(&p).unwrap();

            // |g_{A,alpha}| = |g_{B,alpha}|.
            for alpha in Polarization::ALL {
                prop_assert!((c.g(Direction::A, alpha).norm() - c.g(Direction::B, alpha).norm()).abs() < 1e-14);
            }
            // Phase differences are +/- Phi and +/- Phi'.
            let dphi_a = c.phase(Direction::A, Polarization::X) - c.phase(Direction::A, Polarization::Y);
            let dphi_b = c.phase(Direction::B, Polarization::X) - c.phase(Direction::B, Polarization::Y);
            prop_assert!((dphi_a - phi).abs() < 1e-14);
            prop_assert!((dphi_b + phi).abs() < 1e-14);
            let dphip_a = c.phase_prime(Direction::A, Polarization::X) - c.phase_prime(Direction::A, Polarization::Y);
            prop_assert!((dphip_a - phi_prime).abs() < 1e-14);

            // Rate consistency: directions sum back to the channel rates.
            for alpha in Polarization::ALL {
                let total: f64 = Direction::ALL.iter().map(|&n| c.channel_rate(n, alpha)).sum();
                let total_prime: f64 = Direction::ALL.iter().map(|&n| c.channel_rate_prime(n, alpha)).sum();
                prop_assert!((total - r.biexciton(alpha)).abs() < 1e-13 * gamma_x);
                prop_assert!((total_prime - r.exciton(alpha)).abs() < 1e-13 * gamma_x);
            }

            // gamma_x + gamma_y = 2 gamma_X and the epsilon round-trip holds to
            // machine precision.
            prop_assert!((r.biexciton_x + r.biexciton_y - 2.0 * gamma_x).abs() < 4.0 * f64::EPSILON * gamma_x);
            prop_assert!((r.asymmetry() - epsilon).abs() <= 4.0 * f64::EPSILON);
        }
    }
}

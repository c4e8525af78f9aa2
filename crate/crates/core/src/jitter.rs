//! Gaussian detection-timing-jitter averaging.
//!
//! A detector with RMS timing jitter `σ` reports a measured delay `τ` for a
//! photon pair whose true delay was `τ'`, weighted by
//! `exp(-(τ'-τ)²/(2σ²))`. The state conditioned on the *measured* delay is
//! the kernel-weighted mixture
//!
//! ```text
//! ρ̄_(nm),(n'm')(τ) ∝ ∫_0^∞ dτ' exp(-(τ'-τ)²/2σ²) ψ_nm(τ') ψ*_n'm'(τ')
//! ```
//!
//! normalised to unit trace. The true delay is always nonnegative, so for
//! `τ < 0` (allowed: jitter can report negative delays) only the kernel tail
//! reaches the support — those events pin the true delay near zero and the
//! state is more sharply determined, not less.
//!
//! Because every `ψ_nm(τ')` is a sum of two exponentials (`x`/`y` branches),
//! all sixteen matrix entries reduce to linear combinations of three scalar
//! kernel integrals (`x x`, `y y`, and the oscillating `x y` cross term).
//! They are evaluated with composite Gauss-Legendre panels narrow enough to
//! resolve both the kernel (`σ/10`) and the fine-structure oscillation
//! (`π/(20 max(S, γ_X))`), with the kernel truncated beyond `8σ` where it is
//! below `e^{-32}`.
//!
//! [`average_concurrence`] folds the per-delay concurrence with the measured
//! delay distribution over `τ ∈ [-8σ, 15/γ_X + 8σ]` (trapezoid, 2000 points),
//! sharing one quadrature grid across all outer points.

use num_complex::Complex;

use crate::amplitudes::PathPair;
use crate::entanglement::{
    concurrence_of_delay, density_from_amplitudes, wootters_concurrence, PathDensityMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix4;
use crate::params::{CouplingTable, PhysicalParams, Polarization};
use crate::quad::GaussLegendre;
use crate::scalar::Scalar;

const GL_ORDER: usize = 8;
const CONVERGENCE_TOL: f64 = 1e-8;

/// The f64 contract tolerance, widened in step with the scalar's epsilon so
/// the f32 instantiation does not trip on its own rounding floor.
fn convergence_tol<T: Scalar>() -> T {
    T::lit(CONVERGENCE_TOL).max(T::epsilon() * T::lit(32.0))
}

/// Jitter-averaging configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterConfig<T> {
    sigma: T,
    quad_points: usize,
    window_sigmas: T,
}

impl<T: Scalar> JitterConfig<T> {
    /// Standard configuration: kernel window `8σ`, at least 64 nodes.
    pub fn new(sigma: T) -> Result<Self> {
        Self::with_quad_points(sigma, 64)
    }

    /// Overrides the minimum total quadrature node count (`>= 64`).
    pub fn with_quad_points(sigma: T, quad_points: usize) -> Result<Self> {
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma must be >= 0, got {sigma}"
            )));
        }
        if quad_points < 64 {
            return Err(Error::InvalidParameter(format!(
                "quad_points must be >= 64, got {quad_points}"
            )));
        }
        Ok(JitterConfig {
            sigma,
            quad_points,
            window_sigmas: T::lit(8.0),
        })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }

    /// Kernel half-width in units of `σ` (8 by default; the discarded tail is
    /// bounded by `e^{-32}`).
    pub fn window_sigmas(&self) -> T {
        self.window_sigmas
    }
}

/// Jitter-averaged state at one measured delay.
#[derive(Debug, Clone, PartialEq)]
pub struct JitteredState<T> {
    /// Kernel-averaged, trace-normalised density matrix.
    pub rho_bar: PathDensityMatrix<T>,
    /// Probability density of the measured delay `τ` (conditioned on a
    /// detected pair): the kernel-normalised convolution of
    /// `N(τ')/(γ_x+γ_y)`. Continuous in `σ → 0`, where it reduces to the
    /// conditional coincidence density.
    pub n_bar: T,
    /// Measured delay.
    pub tau: T,
}

/// Exponential-branch decomposition shared by all sixteen entries.
struct AmplitudeBasis<T> {
    coeff: [[Complex<T>; 2]; 4],
    rate_x: T,
    rate_y: T,
    fss: T,
}

impl<T: Scalar> AmplitudeBasis<T> {
    fn new(params: &PhysicalParams<T>, couplings: &CouplingTable<T>) -> Self {
        let rates = params.rates();
        let mut coeff = [[Complex::new(T::zero(), T::zero()); 2]; 4];
        for pair in PathPair::ALL {
            let n = pair.biexciton_dir();
            let m = pair.exciton_dir();
            for alpha in Polarization::ALL {
                coeff[pair.index()][alpha.index()] =
                    -(couplings.g(n, alpha).conj() * couplings.g_prime(m, alpha).conj());
            }
        }
        AmplitudeBasis {
            coeff,
            rate_x: rates.exciton_x,
            rate_y: rates.exciton_y,
            fss: params.fss(),
        }
    }

    /// Assembles the unnormalised averaged matrix from the three kernel
    /// integrals; only the upper triangle is computed, the rest mirrored.
    fn assemble(&self, i_xx: T, i_yy: T, i_xy: Complex<T>) -> Matrix4<T> {
        let mut raw = [[Complex::new(T::zero(), T::zero()); 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let cix = self.coeff[i][0];
                let ciy = self.coeff[i][1];
                let cjx = self.coeff[j][0].conj();
                let cjy = self.coeff[j][1].conj();
                let entry = (cix * cjx).scale(i_xx)
                    + (ciy * cjy).scale(i_yy)
                    + cix * cjy * i_xy
                    + ciy * cjx * i_xy.conj();
                raw[i][j] = entry;
                if i != j {
                    raw[j][i] = entry.conj();
                }
            }
        }
        raw
    }
}

/// Precomputed quadrature grid: branch exponentials sampled once, reused for
/// every measured delay.
struct KernelGrid<T> {
    times: Vec<T>,
    weight: Vec<T>,
    exp_x: Vec<T>,
    exp_y: Vec<T>,
    osc: Vec<Complex<T>>,
    /// Nodes per base panel; refined grids subdivide base panels, so cutting
    /// the kernel window at block boundaries keeps the covered interval
    /// identical across refinements.
    block: usize,
}

impl<T: Scalar> KernelGrid<T> {
    fn build(
        basis: &AmplitudeBasis<T>,
        cfg: &JitterConfig<T>,
        gamma_x: T,
        lo: T,
        hi: T,
        refinement: usize,
    ) -> Self {
        let width_bound = (cfg.sigma / T::lit(10.0))
            .min(T::PI() / (T::lit(20.0) * basis.fss.max(gamma_x)));
        let span = (hi - lo).max(T::zero());
        let min_panels = cfg.quad_points.div_ceil(GL_ORDER);
        let panels = (span / width_bound)
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX / 4)
            .clamp(min_panels, 4_000_000)
            * refinement.max(1);

        let rule = GaussLegendre::new(GL_ORDER);
        let count = panels * GL_ORDER;
        let mut grid = KernelGrid {
            times: Vec::with_capacity(count),
            weight: Vec::with_capacity(count),
            exp_x: Vec::with_capacity(count),
            exp_y: Vec::with_capacity(count),
            osc: Vec::with_capacity(count),
            block: GL_ORDER * refinement.max(1),
        };
        rule.for_each_composite_node(lo, hi, panels, |t, w| {
            let ex = (-basis.rate_x * t).exp();
            let ey = (-basis.rate_y * t).exp();
            let (sin, cos) = (basis.fss * t).sin_cos();
            grid.times.push(t);
            grid.weight.push(w);
            grid.exp_x.push(ex);
            grid.exp_y.push(ey);
            // e^{(z_x + conj(z_y)) t} = e^{-(rate_x+rate_y) t / 2} e^{-i S t}.
            grid.osc.push(Complex::new(cos, -sin).scale((ex * ey).sqrt()));
        });
        grid
    }

    /// Kernel-weighted integrals `(I_xx, I_yy, I_xy)` at measured delay
    /// `tau`, restricted to nodes within the kernel window. The window is
    /// widened to whole panels so every included panel carries its full
    /// Gauss-Legendre weights.
    fn integrals(&self, tau: T, sigma: T, window_sigmas: T) -> (T, T, Complex<T>) {
        let half_window = window_sigmas * sigma;
        let lo = self.times.partition_point(|&t| t < tau - half_window);
        let hi = self.times.partition_point(|&t| t <= tau + half_window);
        let lo = lo - lo % self.block;
        let hi = hi
            .div_ceil(self.block)
            .saturating_mul(self.block)
            .min(self.times.len());
        let inv_two_sigma_sq = T::one() / (T::two() * sigma * sigma);

        let mut i_xx = T::zero();
        let mut i_yy = T::zero();
        let mut i_xy = Complex::new(T::zero(), T::zero());
        for k in lo..hi {
            let dt = self.times[k] - tau;
            let kernel = (-dt * dt * inv_two_sigma_sq).exp() * self.weight[k];
            i_xx += kernel * self.exp_x[k];
            i_yy += kernel * self.exp_y[k];
            i_xy += self.osc[k].scale(kernel);
        }
        (i_xx, i_yy, i_xy)
    }
}

fn raw_state_at<T: Scalar>(
    basis: &AmplitudeBasis<T>,
    grid: &KernelGrid<T>,
    cfg: &JitterConfig<T>,
    tau: T,
) -> (Matrix4<T>, T) {
    let (i_xx, i_yy, i_xy) = grid.integrals(tau, cfg.sigma, cfg.window_sigmas);
    let raw = basis.assemble(i_xx, i_yy, i_xy);
    let trace = raw[0][0].re + raw[1][1].re + raw[2][2].re + raw[3][3].re;
    (raw, trace)
}

/// Converts a raw kernel-weighted trace into the measured-delay probability
/// density (normalised kernel, conditioned on the first photon).
fn density_from_trace<T: Scalar>(trace: T, sigma: T, gamma_total: T) -> T {
    trace / ((T::two() * T::PI()).sqrt() * sigma * gamma_total)
}

fn max_entry_deviation<T: Scalar>(a: &Matrix4<T>, b: &Matrix4<T>) -> T {
    let mut worst = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

/// Jitter-averaged density matrix and measured-delay density at `tau`.
///
/// `tau` may be negative (kernel centred left of the support). With
/// `σ = 0` this reduces to the pure state at `tau`. The quadrature is run at
/// the configured resolution and once more at double resolution; if any
/// normalised matrix entry moves by more than `1e-8` the evaluation is
/// rejected as non-converged.
pub fn jittered_density<T: Scalar>(
    tau: T,
    cfg: &JitterConfig<T>,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> Result<JitteredState<T>> {
    if cfg.sigma == T::zero() {
        let amps = crate::amplitudes::two_photon_amplitudes(tau, params, couplings);
        let rho_bar = density_from_amplitudes(&amps)?;
        let n_bar = amps.norm_sq() / params.rates().biexciton_total;
        return Ok(JitteredState { rho_bar, n_bar, tau });
    }

    let basis = AmplitudeBasis::new(params, couplings);
    let half_window = cfg.window_sigmas * cfg.sigma;
    let lo = (tau - half_window).max(T::zero());
    let hi = tau + half_window;
    if !(hi > lo) {
        // The kernel window lies entirely before the emission support.
        return Err(Error::DegenerateState);
    }

    let coarse_grid = KernelGrid::build(&basis, cfg, params.gamma_x(), lo, hi, 1);
    let fine_grid = KernelGrid::build(&basis, cfg, params.gamma_x(), lo, hi, 2);
    let (raw_coarse, trace_coarse) = raw_state_at(&basis, &coarse_grid, cfg, tau);
    let (raw_fine, trace_fine) = raw_state_at(&basis, &fine_grid, cfg, tau);
    if !(trace_fine > T::zero()) || !(trace_coarse > T::zero()) {
        return Err(Error::DegenerateState);
    }

    let normalize = |raw: &Matrix4<T>, trace: T| {
        let mut out = *raw;
        for row in &mut out {
            for v in row.iter_mut() {
                *v = v.unscale(trace);
            }
        }
        out
    };
    let coarse = normalize(&raw_coarse, trace_coarse);
    let fine = normalize(&raw_fine, trace_fine);
    let delta = max_entry_deviation(&coarse, &fine);
    if delta > convergence_tol::<T>() {
        return Err(Error::QuadratureNotConverged {
            delta: delta.to_f64().unwrap_or(f64::NAN),
        });
    }

    Ok(JitteredState {
        rho_bar: PathDensityMatrix::from_hermitian(&raw_fine)?,
        n_bar: density_from_trace(trace_fine, cfg.sigma, params.rates().biexciton_total),
        tau,
    })
}

/// Concurrence of the jitter-averaged state at measured delay `tau`.
pub fn jittered_concurrence<T: Scalar>(
    tau: T,
    cfg: &JitterConfig<T>,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> Result<T> {
    let state = jittered_density(tau, cfg, params, couplings)?;
    Ok(wootters_concurrence(&state.rho_bar)?.value)
}

/// Which concurrence enters the delay average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CbarWeighting {
    /// Jittered concurrence weighted by the jittered delay density.
    #[default]
    JitteredConcurrence,
    /// Jitter-free concurrence weighted by the jittered delay density.
    PureConcurrence,
}

/// Delay-averaged concurrence `C̄ = ∫ P(τ) C(τ) dτ`, with `P` the measured
/// delay density renormalised on the integration window
/// `τ ∈ [-8σ, 15/γ_X + 8σ]` (uniform 2000-point trapezoid).
pub fn average_concurrence<T: Scalar>(
    cfg: &JitterConfig<T>,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> Result<T> {
    average_concurrence_with(cfg, params, couplings, CbarWeighting::JitteredConcurrence)
}

/// [`average_concurrence`] with an explicit choice of the averaged quantity.
pub fn average_concurrence_with<T: Scalar>(
    cfg: &JitterConfig<T>,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
    weighting: CbarWeighting,
) -> Result<T> {
    const OUTER_POINTS: usize = 2000;
    let decay_span = T::lit(15.0) / params.gamma_x();

    if cfg.sigma == T::zero() {
        // Pure path: weight by N(tau) over [0, 15/gamma_X].
        let mut weighted = T::zero();
        let mut total = T::zero();
        for k in 0..OUTER_POINTS {
            let tau = decay_span * T::from_usize(k).unwrap()
                / T::from_usize(OUTER_POINTS - 1).unwrap();
            let w = if k == 0 || k == OUTER_POINTS - 1 {
                T::half()
            } else {
                T::one()
            };
            let n = crate::correlations::state_norm_density(tau, params, couplings);
            let c = concurrence_of_delay(tau, params, couplings)?;
            weighted += w * n * c;
            total += w * n;
        }
        if !(total > T::zero()) {
            return Err(Error::DegenerateState);
        }
        return Ok(weighted / total);
    }

    let basis = AmplitudeBasis::new(params, couplings);
    let half_window = cfg.window_sigmas * cfg.sigma;
    let outer_lo = -half_window;
    let outer_hi = decay_span + half_window;
    let grid = KernelGrid::build(
        &basis,
        cfg,
        params.gamma_x(),
        T::zero(),
        outer_hi + half_window,
        1,
    );

    let state_at = |grid: &KernelGrid<T>, tau: T| -> Result<Option<(Matrix4<T>, T, T)>> {
        let (raw, trace) = raw_state_at(&basis, grid, cfg, tau);
        if !(trace > T::zero()) {
            // No kernel mass reaches the support; weightless point.
            return Ok(None);
        }
        let rho = PathDensityMatrix::from_hermitian(&raw)?;
        let c = match weighting {
            CbarWeighting::JitteredConcurrence => wootters_concurrence(&rho)?.value,
            CbarWeighting::PureConcurrence => {
                if tau >= T::zero() {
                    concurrence_of_delay(tau, params, couplings)?
                } else {
                    T::zero()
                }
            }
        };
        Ok(Some((*rho.as_matrix(), c, trace)))
    };

    let step = (outer_hi - outer_lo) / T::from_usize(OUTER_POINTS - 1).unwrap();
    let mut weighted = T::zero();
    let mut total = T::zero();
    let mut max_trace = T::zero();
    let mut taus = Vec::with_capacity(OUTER_POINTS);
    let mut matrices = Vec::with_capacity(OUTER_POINTS);
    let mut traces = Vec::with_capacity(OUTER_POINTS);
    for k in 0..OUTER_POINTS {
        let tau = outer_lo + step * T::from_usize(k).unwrap();
        let w = if k == 0 || k == OUTER_POINTS - 1 {
            T::half()
        } else {
            T::one()
        };
        if let Some((rho, c, trace)) = state_at(&grid, tau)? {
            weighted += w * trace * c;
            total += w * trace;
            max_trace = max_trace.max(trace);
            taus.push(tau);
            matrices.push(rho);
            traces.push(trace);
        }
    }
    if !(total > T::zero()) {
        return Err(Error::DegenerateState);
    }

    // Convergence probe: recompute a subsample of the normalised matrices at
    // double quadrature resolution. The kernel integrals converge uniformly
    // in tau, so a subsample bounds the whole grid; the matrix entries (not
    // the concurrence) are compared to keep eigensolver noise out of the
    // quadrature criterion, and points carrying negligible weight are
    // skipped (their normalised state is ill-conditioned by construction and
    // does not influence the average).
    let fine_grid = KernelGrid::build(
        &basis,
        cfg,
        params.gamma_x(),
        T::zero(),
        outer_hi + half_window,
        2,
    );
    let mass_floor = max_trace * T::lit(1e-12);
    for k in (0..taus.len()).step_by((taus.len() / 32).max(1)) {
        if traces[k] < mass_floor {
            continue;
        }
        if let Some((rho_fine, _, _)) = state_at(&fine_grid, taus[k])? {
            let delta = max_entry_deviation(&matrices[k], &rho_fine);
            if delta > convergence_tol::<T>() {
                return Err(Error::QuadratureNotConverged {
                    delta: delta.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }

    Ok(weighted / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::build_couplings;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type P = PhysicalParams<f64>;

    fn system(eps: f64, fss: f64, phi: f64) -> (P, CouplingTable<f64>) {
        let p = P::new(1.0, eps, fss, phi).unwrap();
        let c = build_couplings(&p).unwrap();
        (p, c)
    }

    #[test]
    fn config_validation() {
        assert!(JitterConfig::new(-0.1).is_err());
        assert!(JitterConfig::with_quad_points(0.3, 32).is_err());
        assert!(JitterConfig::new(0.0).is_ok());
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn measured_delay_density_matches_analytic() {
        // At eps = 0, Phi = pi/2 the norm density is 2 e^{-tau'}, so
        // n_bar(tau) = e^{-tau + s^2/2} * 0.5 erfc((s^2 - tau)/(s sqrt 2)).
        let (p, c) = system(0.0, 4.0, FRAC_PI_2);
        let cfg = JitterConfig::new(0.3).unwrap();
        let cases = [
            (-0.5, 0.042444036967970056),
            (0.0, 0.39967529734325519),
            (0.5, 0.57997115328963167),
            (1.0, 0.38434677530817585),
        ];
        for (tau, expected) in cases {
            let state = jittered_density(tau, &cfg, &p, &c).unwrap();
            assert_abs_diff_eq!(state.n_bar, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn sigma_zero_reduces_to_pure_state() {
        let (p, c) = system(0.2, 4.0, 1.1);
        let cfg = JitterConfig::new(0.0).unwrap();
        let state = jittered_density(0.7, &cfg, &p, &c).unwrap();
        assert_abs_diff_eq!(state.rho_bar.purity(), 1.0, epsilon = 1e-12);
        let pure =
            concurrence_of_delay(0.7, &p, &c).unwrap();
        let jittered = wootters_concurrence(&state.rho_bar).unwrap().value;
        assert_abs_diff_eq!(pure, jittered, epsilon = 1e-9);
    }

    #[test]
    fn small_sigma_is_continuous() {
        let (p, c) = system(0.0, 4.0, PI / 3.0);
        let cfg = JitterConfig::new(1e-3).unwrap();
        for &tau in &[0.05, 0.4, PI / 4.0, 1.3, 2.6] {
            let jittered = jittered_concurrence(tau, &cfg, &p, &c).unwrap();
            let pure = concurrence_of_delay(tau, &p, &c).unwrap();
            assert!(
                (jittered - pure).abs() < 1e-3,
                "tau {tau}: jittered {jittered} vs pure {pure}"
            );
        }
    }

    #[test]
    fn jitter_degrades_perfect_chirality() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_2);
        let cfg = JitterConfig::new(0.3).unwrap();
        let at_revival = jittered_concurrence(PI / 4.0, &cfg, &p, &c).unwrap();
        assert!(at_revival < 1.0 - 1e-3);
        assert!(at_revival > 0.5);
        let state = jittered_density(PI / 4.0, &cfg, &p, &c).unwrap();
        assert!(state.rho_bar.purity() < 1.0 - 1e-3);
        assert_abs_diff_eq!(state.rho_bar.trace(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn negative_delay_enhances_concurrence() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_2);
        let cfg = JitterConfig::new(0.3).unwrap();
        let negative = jittered_concurrence(-0.5, &cfg, &p, &c).unwrap();
        let positive = jittered_concurrence(PI / 4.0, &cfg, &p, &c).unwrap();
        assert!(
            negative > positive,
            "C(-0.5) = {negative} should exceed C(pi/S) = {positive}"
        );
    }

    #[test]
    fn nonchiral_stays_separable_under_jitter() {
        let (p, c) = system(0.0, 4.0, 0.0);
        let cfg = JitterConfig::new(0.4).unwrap();
        for &tau in &[-0.3, 0.0, 0.8, 2.0] {
            let conc = jittered_concurrence(tau, &cfg, &p, &c).unwrap();
            assert!(conc < 1e-10, "tau {tau}: C = {conc}");
        }
        let avg = average_concurrence(&cfg, &p, &c).unwrap();
        assert!(avg < 1e-10);
    }

    #[test]
    fn purity_decreases_with_sigma() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_2);
        let tau = PI / 4.0;
        let mut last = f64::INFINITY;
        for &sigma in &[0.05, 0.1, 0.2, 0.4, 0.8] {
            let cfg = JitterConfig::new(sigma).unwrap();
            let purity = jittered_density(tau, &cfg, &p, &c).unwrap().rho_bar.purity();
            assert!(
                purity <= last + 1e-10,
                "purity rose from {last} to {purity} at sigma {sigma}"
            );
            last = purity;
        }
    }

    #[test]
    fn doubling_quad_points_is_converged() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_4);
        for &tau in &[-0.4, 0.2, PI / 4.0, 1.7] {
            let base = jittered_concurrence(
                tau,
                &JitterConfig::with_quad_points(0.3, 64).unwrap(),
                &p,
                &c,
            )
            .unwrap();
            let doubled = jittered_concurrence(
                tau,
                &JitterConfig::with_quad_points(0.3, 128).unwrap(),
                &p,
                &c,
            )
            .unwrap();
            assert!((base - doubled).abs() < 1e-8);
        }
    }

    #[test]
    fn average_concurrence_limits() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_2);
        // sigma = 0, Phi = pi/2: C == 1 everywhere, so the average is 1.
        let cfg = JitterConfig::new(0.0).unwrap();
        let avg = average_concurrence(&cfg, &p, &c).unwrap();
        assert_abs_diff_eq!(avg, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn average_concurrence_jittered_case() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_2);
        let cfg = JitterConfig::new(0.5).unwrap();
        let avg = average_concurrence(&cfg, &p, &c).unwrap();
        assert!(avg > 0.3 && avg < 1.0, "avg = {avg}");
        // The pure-C weighting is a different (larger) average here, since
        // the jitter-free concurrence is identically 1 at Phi = pi/2.
        let pure_weighted =
            average_concurrence_with(&cfg, &p, &c, CbarWeighting::PureConcurrence).unwrap();
        assert!(pure_weighted > avg);
    }

    #[test]
    fn delay_density_oscillates_more_as_chirality_degrades() {
        // The measured-delay density oscillates at the FSS period with an
        // amplitude that grows as the coupling becomes less chiral; at
        // phi = pi/2 the interference term vanishes and the density is a
        // smooth decaying envelope.
        let cfg = JitterConfig::new(0.3).unwrap();
        let fss = 4.0;
        let relative_ripple = |phi: f64| {
            let (p, c) = system(0.0, fss, phi);
            let period = 2.0 * PI / fss;
            // Start past the one-sided truncation transient at tau ~ 0.
            let taus: Vec<f64> = (0..80).map(|k| 1.5 + 2.0 * period * k as f64 / 79.0).collect();
            let vals: Vec<f64> = taus
                .iter()
                .map(|&tau| jittered_density(tau, &cfg, &p, &c).unwrap().n_bar)
                .collect();
            // Remove the exponential envelope before measuring the ripple.
            let flattened: Vec<f64> = taus
                .iter()
                .zip(&vals)
                .map(|(&tau, &v)| v * tau.exp())
                .collect();
            let max = flattened.iter().cloned().fold(f64::MIN, f64::max);
            let min = flattened.iter().cloned().fold(f64::MAX, f64::min);
            let mean = flattened.iter().sum::<f64>() / flattened.len() as f64;
            (max - min) / mean
        };
        let low_chirality = relative_ripple(0.2);
        let mid_chirality = relative_ripple(FRAC_PI_4);
        let perfect = relative_ripple(FRAC_PI_2);
        assert!(perfect < 0.01, "ripple at pi/2: {perfect}");
        assert!(mid_chirality > 5.0 * perfect);
        assert!(low_chirality > mid_chirality, "{low_chirality} vs {mid_chirality}");
    }

    #[test]
    fn window_entirely_before_support_is_degenerate() {
        let (p, c) = system(0.0, 4.0, FRAC_PI_2);
        let cfg = JitterConfig::new(0.3).unwrap();
        assert!(matches!(
            jittered_density(-3.0, &cfg, &p, &c),
            Err(Error::DegenerateState)
        ));
    }
}

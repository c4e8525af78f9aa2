//! Verification suite: one check per acceptance criterion.
//!
//! Every check pins its tolerance in code and reports the measured value, so
//! the JSON report doubles as a regression record. [`run_all`] executes the
//! full suite; the `verify` subcommand exits nonzero if any check fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use anyhow::Result;
use cascade_core::amplitudes::{two_photon_amplitudes, PathPair};
use cascade_core::correlations::coincidence_symmetric;
use cascade_core::entanglement::{
    concurrence_closed_form, concurrence_of_delay, density_from_amplitudes, wootters_concurrence,
};
use cascade_core::jitter::{average_concurrence, jittered_concurrence, jittered_density};
use cascade_core::oracle::{closed_form_deviation, integrate_exciton_pair, norm_deficit, Rk4Config};
use cascade_core::{build_couplings, CouplingTable64, Direction, JitterConfig64, PhysicalParams64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Result of one verification check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// The worst measured value the check compares against its tolerance.
    pub measured: f64,
    pub tolerance: f64,
    pub details: String,
}

impl CheckResult {
    pub fn summary_line(&self) -> String {
        format!(
            "{} {:<38} measured={:<12} tolerance={:<10} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            crate::output::format_g(self.measured, 6),
            crate::output::format_g(self.tolerance, 6),
            self.details
        )
    }
}

/// Machine-readable report for the whole suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    pub tool_version: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn system(eps: f64, fss: f64, phi: f64) -> (PhysicalParams64, CouplingTable64) {
    let params = PhysicalParams64::new(1.0, eps, fss, phi).expect("valid check parameters");
    let couplings = build_couplings(&params).expect("valid check parameters");
    (params, couplings)
}

fn tau_grid(points: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect()
}

/// 1. `C(Φ = π/2, τ) = 1` on the delay grid, via closed form and Wootters.
pub fn check_perfect_chirality() -> CheckResult {
    let (params, couplings) = system(0.0, 4.0, FRAC_PI_2);
    let mut worst = 0.0f64;
    for tau in tau_grid(600, 0.0, 6.0) {
        let closed = concurrence_closed_form(FRAC_PI_2, 4.0, tau);
        let amps = two_photon_amplitudes(tau, &params, &couplings);
        let numeric = density_from_amplitudes(&amps)
            .and_then(|rho| wootters_concurrence(&rho))
            .map(|c| c.value)
            .unwrap_or(f64::NAN);
        worst = worst.max((closed - 1.0).abs()).max((numeric - 1.0).abs());
    }
    CheckResult {
        name: "perfect_chirality_unit_concurrence",
        passed: worst < 1e-9,
        measured: worst,
        tolerance: 1e-9,
        details: "max |C - 1| over 600 delays, closed form and Wootters".into(),
    }
}

/// 2. `C(Φ = 0, τ) = C(Φ = π, τ) = 0` on the same grid.
pub fn check_nonchiral_separability() -> CheckResult {
    let mut worst = 0.0f64;
    for phi in [0.0, PI] {
        let (params, couplings) = system(0.0, 4.0, phi);
        for tau in tau_grid(600, 0.0, 6.0) {
            let analytic = concurrence_of_delay(tau, &params, &couplings).unwrap_or(f64::NAN);
            let amps = two_photon_amplitudes(tau, &params, &couplings);
            let numeric = density_from_amplitudes(&amps)
                .and_then(|rho| wootters_concurrence(&rho))
                .map(|c| c.value)
                .unwrap_or(f64::NAN);
            worst = worst.max(analytic.abs()).max(numeric.abs());
        }
    }
    CheckResult {
        name: "nonchiral_zero_concurrence",
        passed: worst < 1e-9,
        measured: worst,
        tolerance: 1e-9,
        details: "max C over 600 delays at phi = 0 and phi = pi".into(),
    }
}

/// 3. Revival: `C(Φ, τ = π/S) = 1` for intermediate chiralities.
pub fn check_revival_at_half_period() -> CheckResult {
    let fss = 4.0;
    let tau = PI / fss;
    let mut worst = 0.0f64;
    for phi in [PI / 8.0, FRAC_PI_4, FRAC_PI_3, 3.0 * PI / 8.0] {
        let (params, couplings) = system(0.0, fss, phi);
        let closed = concurrence_closed_form(phi, fss, tau);
        let amps = two_photon_amplitudes(tau, &params, &couplings);
        let numeric = density_from_amplitudes(&amps)
            .and_then(|rho| wootters_concurrence(&rho))
            .map(|c| c.value)
            .unwrap_or(f64::NAN);
        worst = worst.max((closed - 1.0).abs()).max((numeric - 1.0).abs());
    }
    CheckResult {
        name: "concurrence_revival_at_s_tau_pi",
        passed: worst < 1e-9,
        measured: worst,
        tolerance: 1e-9,
        details: "max |C - 1| at S tau = pi for phi in {pi/8, pi/4, pi/3, 3pi/8}".into(),
    }
}

/// 4. Closed form vs numeric Wootters over the 200 x 200 (Φ, Sτ) grid.
pub fn check_closed_form_grid() -> CheckResult {
    let fss = 4.0;
    let mut worst = 0.0f64;
    for i in 0..200 {
        let phi = PI / 16.0 + (15.0 * PI / 16.0 - PI / 16.0) * i as f64 / 199.0;
        let (params, couplings) = system(0.0, fss, phi);
        for j in 0..200 {
            let tau = 4.0 * PI * j as f64 / 199.0 / fss;
            let closed = concurrence_closed_form(phi, fss, tau);
            let amps = two_photon_amplitudes(tau, &params, &couplings);
            let numeric = density_from_amplitudes(&amps)
                .and_then(|rho| wootters_concurrence(&rho))
                .map(|c| c.value)
                .unwrap_or(f64::NAN);
            worst = worst.max((closed - numeric).abs());
        }
    }
    CheckResult {
        name: "closed_form_matches_wootters_grid",
        passed: worst < 1e-9,
        measured: worst,
        tolerance: 1e-9,
        details: "max |closed - Wootters| over 200x200 (phi, S tau) grid".into(),
    }
}

/// 5. RK4 oracle equivalence over 100 random draws plus 4th-order scaling.
pub fn check_oracle_equivalence() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xca5cade);
    let config = Rk4Config {
        step: 1e-4,
        t_max: 10.0,
    };
    let mut worst = 0.0f64;
    for draw in 0..100 {
        let eps = rng.gen_range(-0.8..0.8);
        let fss = rng.gen_range(0.0..8.0);
        let phi = rng.gen_range(0.0..PI);
        let (params, couplings) = system(eps, fss, phi);
        let n = if draw % 2 == 0 {
            Direction::A
        } else {
            Direction::B
        };
        match integrate_exciton_pair(0.0, n, &params, &couplings, &config) {
            Ok(traj) => worst = worst.max(closed_form_deviation(&traj, &params, &couplings)),
            Err(_) => worst = f64::INFINITY,
        }
    }

    // Step halving in the truncation-dominated regime.
    let (params, couplings) = system(0.3, 2.0, 1.0);
    let err_at = |h: f64| {
        integrate_exciton_pair(0.0, Direction::B, &params, &couplings, &Rk4Config {
            step: h,
            t_max: 10.0,
        })
        .map(|traj| closed_form_deviation(&traj, &params, &couplings))
        .unwrap_or(f64::INFINITY)
    };
    let factor = err_at(0.02) / err_at(0.01);

    CheckResult {
        name: "oracle_equivalence_and_rk4_order",
        passed: worst < 1e-6 && factor >= 8.0,
        measured: worst,
        tolerance: 1e-6,
        details: format!(
            "max amplitude deviation over 100 draws at step 1e-4; halving factor {factor:.1} (>= 8 required)"
        ),
    }
}

/// 6. Normalisation deficit at the worst-case chirality equals 1/17.
pub fn check_norm_deficit() -> CheckResult {
    let (params, couplings) = system(0.0, 4.0, 0.0);
    let deficit = norm_deficit(&params, &couplings, 20.0).unwrap_or(f64::NAN);
    let error = (deficit - 1.0 / 17.0).abs();
    CheckResult {
        name: "norm_deficit_matches_bound",
        passed: error < 1e-4,
        measured: error,
        tolerance: 1e-4,
        details: format!(
            "|deficit - 1/17| with deficit = {} at eps = 0, S = 4, phi = 0",
            crate::output::format_g(deficit, 8)
        ),
    }
}

/// 7. Same-side coincidence maxima sit 4Φ/S apart (mod the FSS period).
pub fn check_out_of_phase_offset() -> CheckResult {
    let (phi, fss) = (FRAC_PI_3, 4.0);
    let n = 1200;
    let step = 6.0 / (n - 1) as f64;
    let mut best_aa = (0usize, f64::MIN);
    let mut best_bb = (0usize, f64::MIN);
    for i in 0..n {
        let tau = step * i as f64;
        let rec = coincidence_symmetric(tau, 1.0, fss, phi);
        if rec.p(PathPair::AA) > best_aa.1 {
            best_aa = (i, rec.p(PathPair::AA));
        }
        if rec.p(PathPair::BB) > best_bb.1 {
            best_bb = (i, rec.p(PathPair::BB));
        }
    }
    let period = 2.0 * PI / fss;
    let offset = (best_bb.0 as f64 - best_aa.0 as f64) * step;
    let target = 4.0 * phi / fss;
    let wrapped = (offset - target).rem_euclid(period);
    let distance = wrapped.min(period - wrapped);
    CheckResult {
        name: "coincidence_out_of_phase_offset",
        passed: distance <= step,
        measured: distance,
        tolerance: step,
        details: format!(
            "circular distance of (argmax P_BB - argmax P_AA) from 4 phi / S = {} at phi = pi/3",
            crate::output::format_g(target, 8)
        ),
    }
}

/// 8. Jitter continuity at σ → 0 and degradation at σ = 0.3.
pub fn check_jitter_continuity_and_degradation() -> CheckResult {
    let fss = 4.0;
    let cfg = JitterConfig64::new(1e-3).expect("valid sigma");
    let mut worst = 0.0f64;
    for phi in [FRAC_PI_3, FRAC_PI_2] {
        let (params, couplings) = system(0.0, fss, phi);
        for tau in tau_grid(600, 0.0, 6.0) {
            let pure = concurrence_of_delay(tau, &params, &couplings).unwrap_or(f64::NAN);
            let jittered =
                jittered_concurrence(tau, &cfg, &params, &couplings).unwrap_or(f64::NAN);
            worst = worst.max((pure - jittered).abs());
        }
    }

    let (params, couplings) = system(0.0, fss, FRAC_PI_2);
    let cfg = JitterConfig64::new(0.3).expect("valid sigma");
    let degraded = jittered_concurrence(PI / fss, &cfg, &params, &couplings).unwrap_or(f64::NAN);

    CheckResult {
        name: "jitter_continuity_and_degradation",
        passed: worst < 1e-3 && degraded < 1.0,
        measured: worst,
        tolerance: 1e-3,
        details: format!(
            "max |C(sigma = 1e-3) - C(0)| over the delay grid; C(pi/2, sigma = 0.3, tau = pi/S) = {} (< 1 required)",
            crate::output::format_g(degraded, 8)
        ),
    }
}

/// 9. Negative measured delays: higher concurrence, rapidly vanishing weight.
pub fn check_negative_delay_enhancement() -> CheckResult {
    let fss = 4.0;
    let (params, couplings) = system(0.0, fss, FRAC_PI_2);
    let cfg = JitterConfig64::new(0.3).expect("valid sigma");
    let c_negative = jittered_concurrence(-0.5, &cfg, &params, &couplings).unwrap_or(f64::NAN);
    let c_revival = jittered_concurrence(PI / fss, &cfg, &params, &couplings).unwrap_or(f64::NAN);
    let n_negative = jittered_density(-0.5, &cfg, &params, &couplings)
        .map(|s| s.n_bar)
        .unwrap_or(f64::NAN);
    let n_positive = jittered_density(0.5, &cfg, &params, &couplings)
        .map(|s| s.n_bar)
        .unwrap_or(f64::NAN);
    let ratio = n_negative / n_positive;
    CheckResult {
        name: "negative_delay_enhancement",
        passed: c_negative > c_revival && ratio < 0.05,
        measured: ratio,
        tolerance: 0.05,
        details: format!(
            "N_bar(-0.5)/N_bar(+0.5) (< 0.05 required); C(-0.5) = {} vs C(pi/S) = {} (former must exceed)",
            crate::output::format_g(c_negative, 8),
            crate::output::format_g(c_revival, 8)
        ),
    }
}

/// 10. Large-σ asymptote depends only on the chirality phase.
pub fn check_large_sigma_asymptote() -> CheckResult {
    let fss = 4.0;
    let tau = 2.0;
    let mut worst = 0.0f64;
    for phi in [PI / 8.0, FRAC_PI_4, FRAC_PI_2] {
        let (params, couplings) = system(0.0, fss, phi);
        let at = |sigma: f64| {
            let cfg = JitterConfig64::new(sigma).expect("valid sigma");
            jittered_concurrence(tau, &cfg, &params, &couplings).unwrap_or(f64::NAN)
        };
        worst = worst.max((at(5.0) - at(10.0)).abs());
    }
    CheckResult {
        name: "large_sigma_asymptote_phase_only",
        passed: worst < 0.01,
        measured: worst,
        tolerance: 0.01,
        details: "max |C(sigma = 5) - C(sigma = 10)| at tau = 2 over phi in {pi/8, pi/4, pi/2}".into(),
    }
}

/// 11. Delay-averaged concurrence is maximal and symmetric at ε = 0.
pub fn check_symmetric_decay_optimality() -> CheckResult {
    let fss = 4.0;
    let cfg = JitterConfig64::new(3.0).expect("valid sigma");
    let epsilons: Vec<f64> = (0..9).map(|k| -0.8 + 0.2 * k as f64).collect();
    let mut worst_asymmetry = 0.0f64;
    let mut argmax_ok = true;
    let mut details = String::new();
    for phi in [PI / 8.0, FRAC_PI_4, FRAC_PI_2] {
        let values: Vec<f64> = epsilons
            .iter()
            .map(|&eps| {
                let (params, couplings) = system(eps, fss, phi);
                average_concurrence(&cfg, &params, &couplings).unwrap_or(f64::NAN)
            })
            .collect();
        let center = values[4];
        for (k, &v) in values.iter().enumerate() {
            if v > center {
                argmax_ok = false;
            }
            worst_asymmetry = worst_asymmetry.max((v - values[8 - k]).abs());
        }
        details.push_str(&format!(
            "phi={}: C_bar(0)={} ",
            crate::output::format_g(phi, 4),
            crate::output::format_g(center, 6)
        ));
    }
    CheckResult {
        name: "symmetric_decay_optimality",
        passed: argmax_ok && worst_asymmetry < 1e-6,
        measured: worst_asymmetry,
        tolerance: 1e-6,
        details: format!(
            "max |C_bar(eps) - C_bar(-eps)| at sigma = 3 (argmax at eps = 0 also required); {details}"
        ),
    }
}

/// 12. Asymmetric decay shifts the concurrence maximum to an interior delay.
pub fn check_asymmetric_interior_maximum() -> CheckResult {
    let (params, couplings) = system(-0.4, 4.0, FRAC_PI_2);
    let grid = tau_grid(600, 0.0, 6.0);
    let step = grid[1] - grid[0];
    let mut best = (0usize, f64::MIN);
    for (k, &tau) in grid.iter().enumerate() {
        let c = concurrence_of_delay(tau, &params, &couplings).unwrap_or(f64::NAN);
        if c > best.1 {
            best = (k, c);
        }
    }
    let tau_star = grid[best.0];
    let at_zero = concurrence_of_delay(0.0, &params, &couplings).unwrap_or(f64::NAN);
    CheckResult {
        name: "asymmetric_interior_maximum",
        passed: tau_star >= step && best.1 > at_zero,
        measured: tau_star,
        tolerance: step,
        details: format!(
            "argmax of C(tau) at eps = -0.4 (must exceed one grid step); C(tau*) = {} vs C(0) = {}",
            crate::output::format_g(best.1, 8),
            crate::output::format_g(at_zero, 8)
        ),
    }
}

/// 13. Byte-identical figure output with metadata timestamps suppressed.
pub fn check_csv_determinism() -> Result<CheckResult> {
    use crate::figures::{run_figure, FigureId, FigureOptions};
    let dir = tempfile_dir()?;
    let mut opts = FigureOptions::new(&dir.join("a"));
    opts.timestamp = false;
    let first = run_figure(FigureId::Fig3b, &opts)?;
    opts.out_dir = dir.join("b");
    let second = run_figure(FigureId::Fig3b, &opts)?;
    let bytes_a = std::fs::read(&first[0])?;
    let bytes_b = std::fs::read(&second[0])?;
    let identical = bytes_a == bytes_b;
    let differing = bytes_a
        .iter()
        .zip(&bytes_b)
        .filter(|(a, b)| a != b)
        .count()
        + bytes_a.len().abs_diff(bytes_b.len());
    std::fs::remove_dir_all(&dir).ok();
    Ok(CheckResult {
        name: "csv_determinism",
        passed: identical,
        measured: differing as f64,
        tolerance: 0.0,
        details: "differing bytes between two fig3b runs (timestamp suppressed)".into(),
    })
}

fn tempfile_dir() -> Result<std::path::PathBuf> {
    let base = std::env::temp_dir().join(format!(
        "cascade-verify-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or_default()
    ));
    std::fs::create_dir_all(&base)?;
    Ok(base)
}

/// Runs the full suite in criterion order.
pub fn run_all() -> Result<VerifyReport> {
    let checks = vec![
        check_perfect_chirality(),
        check_nonchiral_separability(),
        check_revival_at_half_period(),
        check_closed_form_grid(),
        check_oracle_equivalence(),
        check_norm_deficit(),
        check_out_of_phase_offset(),
        check_jitter_continuity_and_degradation(),
        check_negative_delay_enhancement(),
        check_large_sigma_asymptote(),
        check_symmetric_decay_optimality(),
        check_asymmetric_interior_maximum(),
        check_csv_determinism()?,
    ];
    Ok(VerifyReport {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

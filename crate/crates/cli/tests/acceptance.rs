//! Acceptance suite: runs every verification check at its pinned tolerance
//! and prints one pass/fail line per criterion (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! These are the same checks the `cascade-sim verify` subcommand executes.

use cascade_sim::verify::{self, CheckResult};

fn assert_check(check: CheckResult) {
    println!("{}", check.summary_line());
    assert!(
        check.passed,
        "criterion '{}' failed: measured {} vs tolerance {} ({})",
        check.name, check.measured, check.tolerance, check.details
    );
}

#[test]
fn criterion_01_perfect_chirality_unit_concurrence() {
    assert_check(verify::check_perfect_chirality());
}

#[test]
fn criterion_02_nonchiral_zero_concurrence() {
    assert_check(verify::check_nonchiral_separability());
}

#[test]
fn criterion_03_concurrence_revival_at_s_tau_pi() {
    assert_check(verify::check_revival_at_half_period());
}

#[test]
fn criterion_04_closed_form_matches_wootters_grid() {
    assert_check(verify::check_closed_form_grid());
}

#[test]
fn criterion_05_oracle_equivalence_and_rk4_order() {
    assert_check(verify::check_oracle_equivalence());
}

#[test]
fn criterion_06_norm_deficit_matches_bound() {
    assert_check(verify::check_norm_deficit());
}

#[test]
fn criterion_07_coincidence_out_of_phase_offset() {
    assert_check(verify::check_out_of_phase_offset());
}

#[test]
fn criterion_08_jitter_continuity_and_degradation() {
    assert_check(verify::check_jitter_continuity_and_degradation());
}

#[test]
fn criterion_09_negative_delay_enhancement() {
    assert_check(verify::check_negative_delay_enhancement());
}

#[test]
fn criterion_10_large_sigma_asymptote_phase_only() {
    assert_check(verify::check_large_sigma_asymptote());
}

#[test]
fn criterion_11_symmetric_decay_optimality() {
    assert_check(verify::check_symmetric_decay_optimality());
}

#[test]
fn criterion_12_asymmetric_interior_maximum() {
    assert_check(verify::check_asymmetric_interior_maximum());
}

#[test]
fn criterion_13_csv_determinism() {
    assert_check(verify::check_csv_determinism().expect("determinism check runs"));
}

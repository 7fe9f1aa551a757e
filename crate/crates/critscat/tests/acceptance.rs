//! Acceptance battery: one test per verification criterion.
//!
//! Each test prints the criterion's one-line report (visible with
//! `cargo test --test acceptance -- --nocapture`) and fails if the criterion
//! failed.  `critscat verify` runs the same battery from the command line.

use critscat::verify::{self, CriterionResult};

fn check(r: CriterionResult) {
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_periodic_phase() {
    check(verify::periodic_phase_function());
}

#[test]
fn criterion_02_special_functions() {
    check(verify::special_functions());
}

#[test]
fn criterion_03_model_kernel() {
    check(verify::model_kernel());
}

#[test]
fn criterion_04_expansion_scaling() {
    check(verify::expansion_scaling());
}

#[test]
fn criterion_05_eigenvalue_ladder() {
    check(verify::eigenvalue_ladder());
}

#[test]
fn criterion_06_oscillation_factor_periodicity() {
    check(verify::oscillation_factor_periodicity());
}

#[test]
fn criterion_07_resolvent_oscillation() {
    check(verify::resolvent_oscillation());
}

#[test]
fn criterion_08_spectral_density_persistence() {
    check(verify::spectral_density_persistence());
}

#[test]
fn criterion_09_threshold_phase_asymptotics() {
    check(verify::threshold_phase_asymptotics());
}

#[test]
fn criterion_10_semiclassical_mismatch() {
    check(verify::semiclassical_mismatch());
}

#[test]
fn criterion_11_uniqueness_and_zero_modes() {
    check(verify::uniqueness_and_zero_modes());
}

#[test]
fn criterion_12_sector_classification() {
    check(verify::sector_classification());
}

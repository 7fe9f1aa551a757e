//! End-to-end verification suite.
//!
//! Each check exercises one of the library's core numerical claims at fixed
//! tolerances and returns a [`CriterionResult`] with a one-line metric
//! summary.  [`run_all`] executes the full battery; the `verify` CLI
//! subcommand and the acceptance tests are thin wrappers around it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::fit::{linear_fit, lstsq};
use crate::greens::{
    detect_log_period, fit_oscillation, greens_at_pairs, per_period_amplitudes, probe_pairs,
    rank_one_defect, solve_greens,
};
use crate::grid::{linspace, log_spaced, simpson, trapezoid_weights};
use crate::model_resolvent::{
    dirichlet_ladder, expansion_remainder_norm, oscillation_factor, resolvent_kernel,
};
use crate::potentials::{PotentialSpec, SectorPotential};
use crate::radial_ode::regular_solution_from;
use crate::scattering::{
    angle_distance, boundary_coefficient_at, fit_threshold_asymptotics, phase_shift,
    phase_shift_curve, theoretical_constants, threshold_phase_prediction,
    wkb_integral_inverse_square, wkb_phase_integral,
};
use crate::sectors::{decompose, harmonic_multiplicity, NextOrderScale, Sector};
use crate::specfun::{
    bessel_j, bessel_j_dz, bessel_k_imag_order, gamma, hankel1, hankel1_dz, periodic_phase,
    BranchedWavenumber,
};

const TWO_PI: f64 = 2.0 * PI;

/// Outcome of one verification criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    /// One-line `PASS`/`FAIL` report.
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {:32} {}  [{}]",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.details
        )
    }
}

fn finish(id: usize, name: &'static str, r: Result<(bool, String)>) -> CriterionResult {
    match r {
        Ok((passed, details)) => CriterionResult {
            id,
            name,
            passed,
            details,
        },
        Err(e) => CriterionResult {
            id,
            name,
            passed: false,
            details: format!("error: {e}"),
        },
    }
}

/// Run the full verification battery in order, probing the Green-function
/// criteria with the compact-bump perturbation they are calibrated for.
pub fn run_all() -> Vec<CriterionResult> {
    run_all_with(&PotentialSpec::compact_bump())
}

/// Run the full battery with a caller-chosen perturbation for the two
/// Green-function criteria (7 and 8); all other criteria fix their own data.
pub fn run_all_with(spec: &PotentialSpec) -> Vec<CriterionResult> {
    vec![
        periodic_phase_function(),
        special_functions(),
        model_kernel(),
        expansion_scaling(),
        eigenvalue_ladder(),
        oscillation_factor_periodicity(),
        resolvent_oscillation_for(spec),
        spectral_density_persistence_for(spec),
        threshold_phase_asymptotics(),
        semiclassical_mismatch(),
        uniqueness_and_zero_modes(),
        sector_classification(),
    ]
}

// ---------------------------------------------------------------------------
// 1: periodic phase function
// ---------------------------------------------------------------------------

/// The periodic phase obeys its defining relation (the factored boundary
/// curve stays real and positive), vanishes at zero, is exactly 2π-periodic,
/// and matches the closed-form value at a spot-check point.
pub fn periodic_phase_function() -> CriterionResult {
    finish(1, "periodic phase function", (|| {
        let mut max_res: f64 = 0.0;
        let mut max_per: f64 = 0.0;
        for &sigma in &[0.5, 1.0, 2.0] {
            let amp = (PI * sigma).exp();
            for t in linspace(0.0, TWO_PI, 10_000) {
                let s = periodic_phase(sigma, t)?;
                // e^(pi sigma) e^(-it) - e^(it) must equal r e^(i(s - t)), r > 0
                let v = Complex64::from_polar(amp, -t) - Complex64::from_polar(1.0, t);
                let w = v * Complex64::from_polar(1.0, -(s - t));
                if w.re <= 0.0 {
                    return Ok((false, format!("radial factor not positive at t = {t}")));
                }
                max_res = max_res.max((w.im / w.re).abs());
            }
            for t in linspace(-PI, PI, 1_000) {
                max_per =
                    max_per.max((periodic_phase(sigma, t + TWO_PI)? - periodic_phase(sigma, t)?).abs());
            }
            if periodic_phase(sigma, 0.0)? != 0.0 {
                return Ok((false, format!("nonzero anchor value for sigma = {sigma}")));
            }
        }
        let spot = periodic_phase(1.0, PI / 4.0)?;
        let oracle = -(-PI).exp().atan();
        let spot_err = (spot - oracle).abs();
        let ok = max_res < 1e-12 && max_per < 1e-12 && spot_err < 1e-12 && (spot + 0.0433).abs() < 2e-4;
        Ok((ok, format!(
            "defining-relation residual {max_res:.1e}; periodicity {max_per:.1e}; spot value {spot:.7}"
        )))
    })())
}

// ---------------------------------------------------------------------------
// 2: special functions
// ---------------------------------------------------------------------------

/// Evaluate a cylinder function together with its first two derivatives via
/// the order-lowering recurrence.
fn cylinder_with_derivs(
    f: &dyn Fn(Complex64, Complex64) -> Result<Complex64>,
    nu: Complex64,
    z: Complex64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let c0 = f(nu, z)?;
    let c1 = f(nu - 1.0, z)?;
    let c2 = f(nu - 2.0, z)?;
    let d0 = c1 - nu / z * c0;
    let d1 = c2 - (nu - 1.0) / z * c1;
    let dd0 = d1 - nu / z * d0 + nu / (z * z) * c0;
    Ok((c0, d0, dd0))
}

/// Bessel/Hankel evaluation: differential-equation residual, connection
/// identity across evaluation routes, order/argument reflection symmetry,
/// pair Wronskian, and the wedge lower bound used for inversion stability.
pub fn special_functions() -> CriterionResult {
    finish(2, "special functions", (|| {
        let mut ok = true;
        let mut notes = Vec::new();

        // differential equation residual for J and H1 across all routes
        let mut max_ode: f64 = 0.0;
        for &sigma in &[0.5, 1.0, 2.0] {
            let nu = Complex64::new(0.0, -sigma);
            for f in [&bessel_j as &dyn Fn(_, _) -> _, &hankel1 as &dyn Fn(_, _) -> _] {
                for &m in &[0.7, 3.0, 8.0, 11.5, 12.5, 30.0, 120.0, 400.0] {
                    for &a in &[0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
                        let z = Complex64::from_polar(m, a);
                        let (c, dc, ddc) = cylinder_with_derivs(f, nu, z)?;
                        let coef = 1.0 - nu * nu / (z * z);
                        let res = ddc + dc / z + coef * c;
                        let scale = ddc.norm() + (dc / z).norm() + (coef * c).norm();
                        max_ode = max_ode.max(res.norm() / scale.max(1e-300));
                    }
                }
            }
        }
        ok &= max_ode <= 1e-8;
        notes.push(format!("ode {max_ode:.1e}"));

        // connection identity: direct H1 vs the J-combination, straddling the
        // route switches so the two sides come from different representations.
        // The J-combination cancels like e^(2 Im z) in units of rounding, so
        // the identity is only checkable this way for Im z below ~5.5; the
        // samples cover the series, large-argument, and K-representation
        // routes within that strip.
        let mut max_conn: f64 = 0.0;
        for &sigma in &[0.5, 1.0, 2.0] {
            let nu = Complex64::new(0.0, -sigma);
            let s = (nu * PI).sin();
            let e = (-Complex64::i() * nu * PI).exp();
            for &(m, a) in &[
                (12.2, 0.0),
                (12.2, 0.2),
                (12.2, PI - 0.2),
                (12.2, PI),
                (7.0, 0.905),
                (7.5, 0.74),
                (40.0, 0.0),
                (40.0, 0.1),
                (40.0, PI - 0.1),
                (40.0, PI),
                (300.0, 0.0),
                (300.0, 0.015),
                (300.0, PI),
            ] {
                let z = Complex64::from_polar(m, a);
                let lhs = hankel1(nu, z)?;
                let rhs = (bessel_j(-nu, z)? - e * bessel_j(nu, z)?) / (Complex64::i() * s);
                max_conn = max_conn.max((lhs - rhs).norm() / lhs.norm());
            }
        }
        ok &= max_conn <= 1e-10;
        notes.push(format!("connection {max_conn:.1e}"));

        // symmetry: order reflection and the conjugate-argument mirror
        let mut max_sym: f64 = 0.0;
        for &sigma in &[0.5, 1.0, 2.0] {
            let nu = Complex64::new(0.0, -sigma);
            for &m in &[0.6, 5.0, 20.0, 300.0] {
                for &a in &[0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
                    let z = Complex64::from_polar(m, a);
                    let h = hankel1(nu, z)?;
                    let refl = (-Complex64::i() * nu * PI).exp() * hankel1(-nu, z)?;
                    max_sym = max_sym.max((h - refl).norm() / h.norm());
                    // -conj(z) has argument pi - a, still on the closed branch
                    let zm = Complex64::from_polar(m, PI - a);
                    let mirror = -hankel1(nu, zm)?.conj();
                    max_sym = max_sym.max((h - mirror).norm() / h.norm());
                }
            }
        }
        ok &= max_sym <= 1e-10;
        notes.push(format!("symmetry {max_sym:.1e}"));

        // Wronskian of the outgoing/incoming pair, both compositions
        let mut max_wr: f64 = 0.0;
        for &(sigma, k, r) in &[
            (1.0, 0.7, 2.3),
            (0.5, 0.05, 4.0),
            (2.0, 1.3, 1.7),
            (1.0, 0.5, 200.0),
            (0.5, 1.0, 300.0),
            (2.0, 1.0, 40.0),
            (1.0, 0.5, 7071.0),
        ] {
            let nu = Complex64::new(0.0, -sigma);
            let z = Complex64::new(k * r, 0.0);
            let h1 = hankel1(nu, z)?;
            let dh1 = hankel1_dz(nu, z)?;
            let sr = r.sqrt();
            let fp = sr * h1;
            let dfp = 0.5 / sr * h1 + sr * k * dh1;
            let pairs = [
                (hankel1(-nu, z)?.conj(), hankel1_dz(-nu, z)?.conj()),
                (2.0 * bessel_j(nu, z)? - h1, 2.0 * bessel_j_dz(nu, z)? - dh1),
            ];
            for (h2, dh2) in pairs {
                let fm = sr * h2;
                let dfm = 0.5 / sr * h2 + sr * k * dh2;
                let w = fm * dfp - fp * dfm;
                max_wr = max_wr.max((w - Complex64::new(0.0, 4.0 / PI)).norm());
            }
        }
        ok &= max_wr <= 1e-8;
        notes.push(format!("wronskian {max_wr:.1e}"));

        // lower bound on |H1_nu(k)| in the wedge around the real axis
        // (|arg k| or |pi - arg k| <= pi/4, |k| <= 0.05)
        let mut min_margin = f64::INFINITY;
        for &sigma in &[0.5, 1.0, 2.0] {
            let nu = Complex64::new(0.0, -sigma);
            let c_nu = (gamma(nu + 1.0)? * (nu * PI).sin()).norm();
            let bound = (-sigma * PI / 2.0).exp() * (1.0 - (-sigma * PI / 2.0).exp()) / c_nu;
            for &m in &[1e-6, 1e-4, 5e-3, 0.05] {
                for &a in &[0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 4.0, 7.0 * PI / 8.0, PI] {
                    let z = Complex64::from_polar(m, a);
                    min_margin = min_margin.min(hankel1(nu, z)?.norm() / bound);
                }
            }
        }
        ok &= min_margin >= 1.0;
        notes.push(format!("wedge-bound margin {min_margin:.3}"));

        Ok((ok, notes.join("; ")))
    })())
}

// ---------------------------------------------------------------------------
// 3: model kernel
// ---------------------------------------------------------------------------

/// Smooth compactly supported test bump on `(a, b)`.
fn test_bump(r: f64, a: f64, b: f64) -> f64 {
    let s = (2.0 * r - (a + b)) / (b - a);
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// Complex Simpson quadrature with a split node (for kernels with a kink).
fn simpson_split_c(
    f: &dyn Fn(f64) -> Result<Complex64>,
    a: f64,
    split: f64,
    b: f64,
    n_each: usize,
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi) in [(a, split), (split, b)] {
        let n = 2 * n_each;
        let h = (hi - lo) / n as f64;
        let mut acc = f(lo)? + f(hi)?;
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + i as f64 * h)?;
        }
        total += acc * h / 3.0;
    }
    Ok(total)
}

/// The exactly solvable reference kernel: conjugation across the branch cut,
/// symmetry, the resolvent identity against test functions, and the sign of
/// the imaginary part on the two approach sectors.
pub fn model_kernel() -> CriterionResult {
    finish(3, "model kernel", (|| {
        let sigma = 1.0;
        let mut ok = true;
        let mut notes = Vec::new();

        // conjugation across the branch cut (mirrored wavenumber) and symmetry
        let mut max_conj: f64 = 0.0;
        for &(m, a) in &[(0.03, PI / 6.0), (0.3, PI / 2.0), (1.1, 3.0 * PI / 4.0)] {
            let k = BranchedWavenumber::from_polar(m, a)?;
            let km = k.mirrored();
            for &(r, rp) in &[(1.3, 2.7), (2.0, 5.0), (1.1, 9.0)] {
                let v = resolvent_kernel(sigma, &k, r, rp)?;
                let vm = resolvent_kernel(sigma, &km, r, rp)?;
                max_conj = max_conj.max((v - vm.conj()).norm() / v.norm());
                let vt = resolvent_kernel(sigma, &k, rp, r)?;
                max_conj = max_conj.max((v - vt).norm() / v.norm());
            }
        }
        ok &= max_conj <= 1e-10;
        notes.push(format!("conjugation {max_conj:.1e}"));

        // applying the operator to the smoothed kernel returns the test bump
        let (fa, fb) = (1.2, 3.6);
        let f_max = (-1.0f64).exp();
        let mut max_delta: f64 = 0.0;
        for &(m, a) in &[(0.6, PI / 3.0), (0.35, 3.0 * PI / 4.0)] {
            let k = BranchedWavenumber::from_polar(m, a)?;
            let k2 = k.value() * k.value();
            let g = |r: f64| -> Result<Complex64> {
                let integrand =
                    |rp: f64| -> Result<Complex64> { Ok(resolvent_kernel(sigma, &k, r, rp)? * test_bump(rp, fa, fb)) };
                simpson_split_c(&integrand, fa, r.clamp(fa, fb), fb, 600)
            };
            for &r in &[1.6, 2.4, 3.1] {
                // seventh-order stencil: the bump's high derivatives make a
                // five-point rule too coarse, and the 1/h^2 amplification of
                // quadrature noise forbids shrinking h instead
                let h = 0.05;
                let gs: Vec<Complex64> = (-3..=3)
                    .map(|j| g(r + j as f64 * h))
                    .collect::<Result<_>>()?;
                let d2 = (2.0 * (gs[0] + gs[6]) - 27.0 * (gs[1] + gs[5])
                    + 270.0 * (gs[2] + gs[4])
                    - 490.0 * gs[3])
                    / (180.0 * h * h);
                let g0 = gs[3];
                let res = -d2 + ((-sigma * sigma - 0.25) / (r * r) - k2) * g0
                    - test_bump(r, fa, fb);
                max_delta = max_delta.max(res.norm() / f_max);
            }
        }
        ok &= max_delta <= 1e-6;
        notes.push(format!("delta-identity {max_delta:.1e}"));

        // sign of the imaginary part of the quadratic form on each sector
        let grid = linspace(1.2, 6.0, 241);
        let w = trapezoid_weights(&grid);
        let bumps: [&dyn Fn(f64) -> f64; 2] = [
            &|r| test_bump(r, 1.2, 3.6),
            &|r| test_bump(r, 1.5, 6.0),
        ];
        let mut worst_sign = f64::INFINITY;
        for &(m, a) in &[
            (0.05, 0.05),
            (0.3, PI / 8.0),
            (0.8, PI / 4.0),
            (0.05, PI - 0.05),
            (0.3, 7.0 * PI / 8.0),
            (0.8, 3.0 * PI / 4.0),
        ] {
            let k = BranchedWavenumber::from_polar(m, a)?;
            let sign = if a <= PI / 2.0 { 1.0 } else { -1.0 };
            let mut reg = Vec::with_capacity(grid.len());
            let mut out = Vec::with_capacity(grid.len());
            for &r in &grid {
                reg.push(crate::model_resolvent::regular_dirichlet(sigma, &k, r)?.0);
                out.push(crate::model_resolvent::outgoing_dirichlet(sigma, &k, r)?.0);
            }
            for f in &bumps {
                let fv: Vec<f64> = grid.iter().map(|&r| f(r)).collect();
                let norm2: f64 = grid
                    .iter()
                    .zip(&fv)
                    .zip(&w)
                    .map(|((_, &v), &wi)| wi * v * v)
                    .sum();
                let mut q = Complex64::new(0.0, 0.0);
                for i in 0..grid.len() {
                    for j in 0..grid.len() {
                        let kern = if i <= j { reg[i] * out[j] } else { reg[j] * out[i] };
                        q += w[i] * fv[i] * kern * w[j] * fv[j];
                    }
                }
                worst_sign = worst_sign.min(sign * q.im / norm2);
            }
        }
        ok &= worst_sign >= -1e-10;
        notes.push(format!("form-sign margin {worst_sign:+.1e}"));

        Ok((ok, notes.join("; ")))
    })())
}

// ---------------------------------------------------------------------------
// 4: expansion scaling
// ---------------------------------------------------------------------------

/// The weighted remainder of the rank-one kernel expansion decays as the
/// wavenumber goes to zero: log-log slope at least `s' - 1` for the claimed
/// rate parameter `s' = 1.5` (less a grid-truncation allowance), and a
/// three-decade drop relative to the value at the top of the window.
pub fn expansion_scaling() -> CriterionResult {
    finish(4, "expansion remainder scaling", (|| {
        let sigma = 1.0;
        let s = 2.0;
        let ks = [1e-4, 10f64.powf(-3.5), 1e-3, 10f64.powf(-2.5), 1e-2];
        let mut lnk = Vec::new();
        let mut lne = Vec::new();
        for &k in &ks {
            let e = expansion_remainder_norm(sigma, &BranchedWavenumber::real(k)?, s, 48)?;
            lnk.push(k.ln());
            lne.push(e.ln());
        }
        let (slope, _) = linear_fit(&lnk, &lne)?;
        let e_lo = lne[0].exp();
        let e_ref = expansion_remainder_norm(sigma, &BranchedWavenumber::real(1e-1)?, s, 48)?;
        let ratio = e_lo / e_ref;
        let ok = slope >= 0.4 && ratio <= 1e-3;
        Ok((ok, format!(
            "slope {slope:.3}; error at 1e-4 / error at 1e-1 = {ratio:.2e}"
        )))
    })())
}

// ---------------------------------------------------------------------------
// 5: eigenvalue ladder
// ---------------------------------------------------------------------------

/// Negative-spectrum ladder of the reference operator: geometric zero ratios
/// with the predicted accumulation factor, and vanishing root residuals.
pub fn eigenvalue_ladder() -> CriterionResult {
    finish(5, "eigenvalue ladder", (|| {
        let mut ok = true;
        let mut notes = Vec::new();
        for &sigma in &[0.5, 1.0, 2.0] {
            let kappas = dirichlet_ladder(sigma, 8)?;
            let q = (-PI / sigma).exp();
            let mut worst_ratio: f64 = 0.0;
            for n in 4..kappas.len() {
                let ratio = kappas[n] / kappas[n - 1];
                worst_ratio = worst_ratio.max((ratio - q).abs() / q);
            }
            let mut worst_res: f64 = 0.0;
            for &x in &kappas {
                worst_res = worst_res.max(bessel_k_imag_order(sigma, x)?.abs());
            }
            ok &= worst_ratio < 1e-3 && worst_res < 1e-12;
            if sigma == 1.0 {
                // spot value of the accumulation factor
                ok &= (q - 0.0432139).abs() < 1e-6;
            }
            notes.push(format!(
                "sigma {sigma}: ratio err {worst_ratio:.1e}, root res {worst_res:.1e}"
            ));
        }
        Ok((ok, notes.join("; ")))
    })())
}

// ---------------------------------------------------------------------------
// 6: oscillation factor periodicity
// ---------------------------------------------------------------------------

/// The scalar oscillation factor is exactly log-periodic in the wavenumber
/// and traces a circle (a Möbius image of the oscillation carrier's circle).
pub fn oscillation_factor_periodicity() -> CriterionResult {
    finish(6, "oscillation factor periodicity", (|| {
        let mut ok = true;
        let mut notes = Vec::new();
        for &sigma in &[0.5, 1.0, 2.0] {
            let shrink = (-PI / sigma).exp();
            let ks = log_spaced(1e-4, 1e-1, 14);
            let mut zetas = Vec::with_capacity(ks.len());
            let mut max_per: f64 = 0.0;
            for &k in &ks {
                let z = oscillation_factor(sigma, &BranchedWavenumber::real(k)?)?;
                let zs = oscillation_factor(sigma, &BranchedWavenumber::real(shrink * k)?)?;
                max_per = max_per.max((z - zs).norm() / z.norm());
                zetas.push(z);
            }
            // circle through the sampled values: linear least squares for
            // x^2 + y^2 + a x + b y + c = 0, then max radial deviation
            let design: Vec<Vec<f64>> = zetas.iter().map(|z| vec![z.re, z.im, 1.0]).collect();
            let rhs: Vec<f64> = zetas.iter().map(|z| -(z.norm_sqr())).collect();
            let sol = lstsq(&design, &rhs)?;
            let center = Complex64::new(-sol[0] / 2.0, -sol[1] / 2.0);
            let radius = (center.norm_sqr() - sol[2]).sqrt();
            let mut max_circ: f64 = 0.0;
            for z in &zetas {
                max_circ = max_circ.max(((z - center).norm() - radius).abs());
            }
            ok &= max_per < 1e-12 && max_circ < 1e-10;
            notes.push(format!(
                "sigma {sigma}: periodicity {max_per:.1e}, circle residual {max_circ:.1e}"
            ));
        }
        Ok((ok, notes.join("; ")))
    })())
}

// ---------------------------------------------------------------------------
// 7: resolvent oscillation
// ---------------------------------------------------------------------------

/// Low-energy Green function oscillation for the compact-bump preset: the
/// oscillating amplitudes form a rank-one grid, every probe pair sees the
/// same Möbius parameter, and the detected log-period matches `pi / sigma`.
pub fn resolvent_oscillation() -> CriterionResult {
    resolvent_oscillation_for(&PotentialSpec::compact_bump())
}

/// Same criterion probed with a caller-chosen perturbation of the benchmark
/// sector; the tolerances are calibrated for the bundled presets.
pub fn resolvent_oscillation_for(spec: &PotentialSpec) -> CriterionResult {
    finish(7, "resolvent oscillation", (|| {
        let sigma = 1.0;
        let pot = SectorPotential::new(Sector::new(3, 0, 1.25)?, spec.clone())?;
        let pairs = probe_pairs();
        // three log-periods of wavenumber ending at 1e-3, 48 points per period
        let n = 145;
        let span = 3.0 * PI / sigma;
        let ks: Vec<f64> = (0..n)
            .map(|i| 1e-3 * (-span + span * i as f64 / (n - 1) as f64).exp())
            .collect();
        let mut ys = vec![Vec::with_capacity(n); pairs.len()];
        for &k in &ks {
            let kb = BranchedWavenumber::real(k)?;
            let (vals, _) = greens_at_pairs(&pot, &kb, &pairs)?;
            for (p, v) in vals.into_iter().enumerate() {
                ys[p].push(v);
            }
        }

        let shared = fit_oscillation(sigma, &ks, &ys)?;
        let defect = rank_one_defect(&shared.amplitudes[..6])?;

        // independent per-pair fits must land on the same Möbius parameter
        let mut bs = Vec::with_capacity(pairs.len());
        for y in &ys {
            bs.push(fit_oscillation(sigma, &ks, std::slice::from_ref(y))?.b);
        }
        let mean = bs.iter().sum::<Complex64>() / bs.len() as f64;
        let dispersion = bs
            .iter()
            .map(|b| (b - mean).norm())
            .fold(0.0f64, f64::max);

        // detected log-period of the imaginary part on one probe pair
        // (the wavenumber grid is already increasing)
        let ln_ks: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
        let imf: Vec<f64> = ys[0].iter().map(|v| v.im).collect();
        let period = detect_log_period(&ln_ks, &imf)?;
        let period_err = (period - PI / sigma).abs() / (PI / sigma);

        let ok = defect < 1e-4 && dispersion < 1e-4 && period_err < 0.01;
        Ok((ok, format!(
            "rank-one defect {defect:.1e}; parameter dispersion {dispersion:.1e}; period err {:.2}%",
            100.0 * period_err
        )))
    })())
}

// ---------------------------------------------------------------------------
// 8: spectral density persistence
// ---------------------------------------------------------------------------

/// The on-diagonal spectral density keeps oscillating with undiminished
/// amplitude as the energy goes to zero, and the solution pair's Wronskian
/// stays away from zero on the real window (no small positive eigenvalues).
pub fn spectral_density_persistence() -> CriterionResult {
    spectral_density_persistence_for(&PotentialSpec::compact_bump())
}

/// Same criterion probed with a caller-chosen perturbation of the benchmark
/// sector.
pub fn spectral_density_persistence_for(spec: &PotentialSpec) -> CriterionResult {
    finish(8, "spectral density persistence", (|| {
        let sigma = 1.0f64;
        let pot = SectorPotential::new(Sector::new(3, 0, 1.25)?, spec.clone())?;
        let period = PI / sigma;
        let span = 3.2 * period;
        let n = 160;
        let r_probe = 2.0;
        let mut ln_ks = Vec::with_capacity(n);
        let mut rho = Vec::with_capacity(n);
        let mut min_w = f64::INFINITY;
        for i in 0..n {
            let lk = 1e-2f64.ln() - span + span * i as f64 / (n - 1) as f64;
            let k = lk.exp();
            let solve = solve_greens(&pot, &BranchedWavenumber::real(k)?, &[r_probe])?;
            ln_ks.push(lk);
            rho.push(solve.spectral_density(r_probe)?);
            min_w = min_w.min(solve.wronskian_normalized());
        }
        let amps = per_period_amplitudes(&ln_ks, &rho, period);
        if amps.len() < 3 {
            return Ok((false, format!("only {} full periods sampled", amps.len())));
        }
        // windows run from the deepest wavenumbers up; the "first" period as
        // the energy decreases is the last window
        let first = *amps.last().unwrap();
        let min_amp = amps.iter().cloned().fold(f64::INFINITY, f64::min);
        let ok = min_amp >= 0.5 * first && min_w > 0.05;
        Ok((ok, format!(
            "amplitudes {:?} (min/first {:.3}); min normalized wronskian {min_w:.3}",
            amps.iter().map(|a| (a * 1e3).round() / 1e3).collect::<Vec<_>>(),
            min_amp / first
        )))
    })())
}

// ---------------------------------------------------------------------------
// 9: threshold phase asymptotics
// ---------------------------------------------------------------------------

/// Phase-shift law at threshold for pure critical sectors: slope of the
/// unwrapped phase against `-ln k` equals the oscillation rate, the fitted
/// constants match the predicted ones, and the closed-form curve matches the
/// measured phase deep in the threshold regime.
pub fn threshold_phase_asymptotics() -> CriterionResult {
    finish(9, "threshold phase asymptotics", (|| {
        let mut ok = true;
        let mut notes = Vec::new();
        for &(sigma, periods) in &[(0.5, 2.0), (1.0, 3.0), (2.0, 4.0)] {
            let gamma_c = 0.25 + sigma * sigma;
            let pot = SectorPotential::new(Sector::new(3, 0, gamma_c)?, PotentialSpec::Pure)?;
            let consts = theoretical_constants(&pot)?;

            // integer number of log-periods, 56 points per period
            let per_pts = 56usize;
            let span = periods * PI / sigma;
            let n = (per_pts as f64 * periods) as usize + 1;
            let k_hi = 1e-2;
            let ks: Vec<f64> = (0..n)
                .map(|i| k_hi * (-span * i as f64 / (n - 1) as f64).exp())
                .collect();
            let curve = phase_shift_curve(&pot, &ks)?;
            // a least-squares slope over finitely many periods is biased by
            // the periodic term itself (the bias decays only like 1/span^2);
            // differences across exactly one period cancel it identically
            let period = PI / sigma;
            let m = curve.ks.len() - per_pts;
            let slope = (0..m)
                .map(|i| curve.sigma_sr[i + per_pts] - curve.sigma_sr[i])
                .sum::<f64>()
                / (m as f64 * period);
            let slope_err = (slope - sigma).abs() / sigma;
            ok &= slope_err < 0.005;

            let fit = fit_threshold_asymptotics(&curve, sigma)?;
            let c1_err = angle_distance(fit.c1, consts.c1, PI);
            let c2_err = angle_distance(fit.c2.rem_euclid(TWO_PI), consts.c2, TWO_PI);
            ok &= c1_err < 1e-2 && c2_err < 1e-2;

            // closed-form curve against a direct measurement near threshold
            let k_deep = 1e-5;
            let measured = phase_shift(&pot, k_deep)?;
            let predicted = threshold_phase_prediction(sigma, consts.theta0, k_deep)?;
            let law_err = angle_distance(measured, predicted.rem_euclid(TWO_PI), TWO_PI);
            ok &= law_err <= 1e-2;

            notes.push(format!(
                "sigma {sigma}: slope err {:.2e}, offsets ({c1_err:.1e}, {c2_err:.1e}), law {law_err:.1e}",
                slope_err
            ));
        }
        Ok((ok, notes.join("; ")))
    })())
}

// ---------------------------------------------------------------------------
// 10: semiclassical mismatch
// ---------------------------------------------------------------------------

/// The semiclassical excess-phase integral and the true phase both diverge
/// logarithmically at threshold for a critical tail, but with different
/// slopes — the approximation misses the correct rate.  For subcritical
/// tails the integral is stable under moving its far cutoff.
pub fn semiclassical_mismatch() -> CriterionResult {
    finish(10, "semiclassical mismatch", (|| {
        let gamma_c = 1.25;
        let sigma = 1.0f64;
        let pot = SectorPotential::new(Sector::new(3, 0, gamma_c)?, PotentialSpec::Pure)?;

        // true slope from the unwrapped phase curve (three log-periods)
        let span = 3.0 * PI / sigma;
        let n = 145;
        let ks: Vec<f64> = (0..n)
            .map(|i| 1e-2 * (-span * i as f64 / (n - 1) as f64).exp())
            .collect();
        let curve = phase_shift_curve(&pot, &ks)?;
        let slope_true = -curve.slope_vs_minus_ln_k()?; // against ln sqrt(lambda)
        let true_err = (slope_true + sigma).abs() / sigma;

        // integral slope against ln sqrt(lambda), closed form for the
        // critical tail seeded at the model onset radius
        let r0 = 1.0;
        let lam_ks = log_spaced(1e-6, 1e-2, 2);
        let xs: Vec<f64> = lam_ks.iter().map(|k| k.ln()).collect();
        let ys: Vec<f64> = lam_ks
            .iter()
            .map(|k| wkb_integral_inverse_square(gamma_c, k * k, r0))
            .collect();
        let (slope_int, _) = linear_fit(&xs, &ys)?;
        let int_err = (slope_int + gamma_c.sqrt()).abs() / gamma_c.sqrt();

        // the quadrature route agrees with the closed form on the critical tail
        let lam = 1e-5;
        let quad = wkb_phase_integral(gamma_c, 2.0, lam, r0)?;
        let closed = wkb_integral_inverse_square(gamma_c, lam, r0);
        let route_err = (quad - closed).abs() / closed.abs();

        // subcritical tail: moving the internal far cutoff out 100x does not move
        // the value beyond 1e-8
        let (g, mu, lam_s, r0_s) = (1.0, 1.5, 1e-4, 2.0);
        let base = wkb_phase_integral(g, mu, lam_s, r0_s)?;
        let r1 = ((g / lam_s).powf(1.0 / mu) * 1e4).max(100.0 * r0_s) * 100.0;
        let sqrt_l = lam_s.sqrt();
        let far = simpson(
            |x: f64| {
                let r = x.exp();
                ((lam_s + g * r.powf(-mu)).sqrt() - sqrt_l) * r
            },
            r0_s.ln(),
            r1.ln(),
            60_000,
        );
        let x1 = g / (lam_s * r1.powf(mu));
        let tail = sqrt_l * x1 * r1 * (0.5 / (mu - 1.0) - x1 / (8.0 * (2.0 * mu - 1.0)));
        let stab = ((base - (far + tail)) / base).abs();

        let mismatch = (slope_int - slope_true).abs();
        let ok = true_err < 0.01
            && int_err < 0.01
            && mismatch > 0.08
            && route_err < 1e-8
            && stab <= 1e-8;
        Ok((ok, format!(
            "true slope {slope_true:.4} vs integral slope {slope_int:.4} (gap {mismatch:.3}); route {route_err:.1e}; cutoff stability {stab:.1e}"
        )))
    })())
}

// ---------------------------------------------------------------------------
// 11: uniqueness and zero modes
// ---------------------------------------------------------------------------

/// The regular solution does not depend on where the origin series hands off
/// to the integrator, and no bundled potential carries a zero-energy bound
/// state: the boundary coefficient stays away from zero.
pub fn uniqueness_and_zero_modes() -> CriterionResult {
    finish(11, "uniqueness and zero modes", (|| {
        let sector = Sector::new(3, 0, 1.25)?;
        let specs = [
            PotentialSpec::Pure,
            PotentialSpec::compact_bump(),
            PotentialSpec::power_tail(),
            PotentialSpec::singular_head(),
        ];
        let mut ok = true;
        let mut max_prop: f64 = 0.0;
        let mut min_coeff = f64::INFINITY;
        let mut notes = Vec::new();
        for spec in specs {
            let pot = SectorPotential::new(sector, spec)?;
            for k2 in [Complex64::new(0.09, 0.0), Complex64::new(0.02, 0.02)] {
                let a = regular_solution_from(&pot, k2, &[1.0, 2.5], 0.02)?;
                let b = regular_solution_from(&pot, k2, &[1.0, 2.5], 0.045)?;
                for (sa, sb) in a.iter().zip(&b) {
                    max_prop = max_prop
                        .max((sa.u - sb.u).norm() / sa.u.norm())
                        .max((sa.du - sb.du).norm() / sa.du.norm());
                }
            }
            // boundary coefficient at zero energy, evaluated where the
            // perturbation has (numerically) ended
            let r_eval = pot.pert_support_end().unwrap_or(5e4);
            let d = boundary_coefficient_at(&pot, r_eval)?;
            min_coeff = min_coeff.min(d.norm());
            notes.push(format!("{} |D| {:.3}", pot.spec().name(), d.norm()));
        }
        ok &= max_prop <= 1e-8 && min_coeff >= 1e-6;
        notes.push(format!("hand-off sensitivity {max_prop:.1e}"));
        Ok((ok, notes.join("; ")))
    })())
}

// ---------------------------------------------------------------------------
// 12: sector classification
// ---------------------------------------------------------------------------

/// Angular decomposition bookkeeping: which channels oscillate, the first
/// decaying exponent, its multiplicity, and the scale of the next-order term.
pub fn sector_classification() -> CriterionResult {
    finish(12, "sector classification", (|| {
        let mut ok = true;
        let mut notes = Vec::new();

        let d1 = decompose(3, 1.25)?;
        let c1 = d1.oscillatory == vec![0]
            && (d1.first_decaying_exponent - 1.0).abs() < 1e-12
            && d1.first_decaying_multiplicity == 3
            && d1.next_order_scale == NextOrderScale::KSquaredLog;
        ok &= c1;
        notes.push(format!(
            "(3, 1.25): osc {:?}, mu {}, mult {}, {:?}",
            d1.oscillatory, d1.first_decaying_exponent, d1.first_decaying_multiplicity, d1.next_order_scale
        ));

        let d2 = decompose(3, 4.0)?;
        let c2 = d2.oscillatory == vec![0, 1]
            && (d2.first_decaying_exponent - 1.5).abs() < 1e-12
            && d2.first_decaying_multiplicity == 5
            && d2.next_order_scale == NextOrderScale::KSquared;
        ok &= c2;
        notes.push(format!(
            "(3, 4): osc {:?}, mu {}, mult {}, {:?}",
            d2.oscillatory, d2.first_decaying_exponent, d2.first_decaying_multiplicity, d2.next_order_scale
        ));

        let mut mult_ok = true;
        for m in 0..=20u32 {
            mult_ok &= harmonic_multiplicity(3, m)? == (2 * m + 1) as u128;
        }
        ok &= mult_ok;
        notes.push(format!("degree multiplicities 2m+1 up to m=20: {mult_ok}"));

        Ok((ok, notes.join("; ")))
    })())
}

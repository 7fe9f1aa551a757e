//! Phase shifts and their threshold asymptotics.
//!
//! The regular solution at energy `k^2` behaves like `C sin(kr + s(k))` for
//! large `r` with `C > 0`; `s(k)` is the (short-range) phase shift, defined
//! modulo `2 pi`.  In an oscillatory sector it diverges logarithmically at
//! threshold with a universal log-periodic modulation:
//!
//! ```text
//! s(k) = -sigma ln k + periodic_phase(sigma, sigma ln k + C1) + C2 + o(1)
//! ```
//!
//! For a perturbation supported in `r <= R` both constants come from one
//! complex boundary coefficient of the zero-energy regular solution `u`:
//!
//! ```text
//! D = 2^nu R^(1/2-nu) / Gamma(1-nu) * ((1/2-nu) u(R)/R - u'(R)),
//! C1 = arg D =: theta0,      C2 = 3 pi/4 - theta0   (mod 2 pi).
//! ```
//!
//! The offset `3 pi/4` follows from inverting the outgoing-basis connection
//! matrix (determinant `-4i/pi`) and the large-argument Hankel phase `-pi/4`;
//! both routes below and the free-solution sanity check pin its sign.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fit::{golden_min, linear_fit};
use crate::grid::simpson;
use crate::potentials::{PotentialSpec, SectorPotential};
use crate::radial_ode::regular_solution;
use crate::specfun::{bessel_j, bessel_j_dz, gamma, hankel1, hankel1_dz, periodic_phase};

const TWO_PI: f64 = 2.0 * PI;

/// Distance between two angles on a circle of circumference `modulus`.
pub fn angle_distance(a: f64, b: f64, modulus: f64) -> f64 {
    let d = (a - b).rem_euclid(modulus);
    d.min(modulus - d)
}

fn wrap_pm_pi(x: f64) -> f64 {
    x - TWO_PI * (x / TWO_PI).round()
}

// ---------------------------------------------------------------------------
// coefficient extraction
// ---------------------------------------------------------------------------

/// Trig-basis coefficients `(a_cos, a_sin)` of `u = a_cos cos(kr) + a_sin sin(kr)`
/// read off from one Cauchy-data sample of a real solution.
pub fn trig_coefficients(r: f64, u: f64, du: f64, k: f64) -> (f64, f64) {
    let (s, c) = (k * r).sin_cos();
    (u * c - du / k * s, u * s + du / k * c)
}

/// Outgoing/incoming-basis coefficients of the regular solution, extracted at
/// a radius where the potential has (numerically) reached the critical model.
#[derive(Debug, Clone, Copy)]
pub struct HankelCoefficients {
    pub a_out: Complex64,
    pub a_in: Complex64,
    pub r_eff: f64,
    /// `|a_in - e^(-sigma pi) conj(a_out)| / |a_out|`; zero for a real solution
    /// on the real axis, so a direct numerical-consistency figure.
    pub reality_defect: f64,
}

/// Radius at which the outgoing basis is exact (compact support) or accurate
/// to ~1e-9 in phase (power tail), given the wavenumber.
fn extraction_radius(pot: &SectorPotential, k: f64) -> (f64, bool) {
    match pot.pert_support_end() {
        Some(end) => (end, true),
        None => {
            let (amp, p) = match *pot.spec() {
                PotentialSpec::PowerTail { amplitude, decay } => (amplitude.abs(), decay),
                // other presets all have compact support
                _ => (0.1, 1.0),
            };
            // residual basis-rotation beyond R is ~ integral of |tail|/(2k)
            let r_tail = (amp / (2.0 * k * (1.0 + p) * 1e-9)).powf(1.0 / (1.0 + p));
            (r_tail.max(10.0 / k).max(20.0), false)
        }
    }
}

/// Extract the outgoing/incoming coefficients at wavenumber `k > 0`.
pub fn hankel_coefficients(pot: &SectorPotential, k: f64) -> Result<HankelCoefficients> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("wavenumber must be positive: {k}")));
    }
    let sigma = pot.sector().sigma()?;
    let nu = Complex64::new(0.0, -sigma);
    let (r_eff, _) = extraction_radius(pot, k);
    let k2 = Complex64::new(k * k, 0.0);
    let s = regular_solution(pot, k2, &[r_eff])?[0];

    let z = Complex64::new(k * r_eff, 0.0);
    let h1 = hankel1(nu, z)?;
    let dh1 = hankel1_dz(nu, z)?;
    let j = bessel_j(nu, z)?;
    let dj = bessel_j_dz(nu, z)?;
    let h2 = 2.0 * j - h1;
    let dh2 = 2.0 * dj - dh1;

    let sr = r_eff.sqrt();
    let out = sr * h1;
    let dout = 0.5 / sr * h1 + sr * k * dh1;
    let inc = sr * h2;
    let dinc = 0.5 / sr * h2 + sr * k * dh2;

    // u = a_out phi_out + a_in phi_in; the connection determinant is
    // W(phi_out, phi_in) = -4i/pi
    let pref = Complex64::new(0.0, -PI / 4.0); // pi/(4i)
    let a_out = pref * (inc * s.du - dinc * s.u);
    let a_in = pref * (dout * s.u - out * s.du);
    if a_out.norm() == 0.0 && a_in.norm() == 0.0 {
        return Err(Error::DenominatorZero(
            "both asymptotic coefficients vanish".into(),
        ));
    }
    let reality_defect =
        (a_in - (-sigma * PI).exp() * a_out.conj()).norm() / a_out.norm().max(1e-300);
    Ok(HankelCoefficients {
        a_out,
        a_in,
        r_eff,
        reality_defect,
    })
}

// ---------------------------------------------------------------------------
// phase shift
// ---------------------------------------------------------------------------

/// Phase shift at wavenumber `k`, in `[0, 2 pi)`.  Outgoing-basis route: the
/// large-`r` phase of the outgoing basis function contributes exactly `-pi/4`.
pub fn phase_shift(pot: &SectorPotential, k: f64) -> Result<f64> {
    let c = hankel_coefficients(pot, k)?;
    Ok((c.a_out.arg() + PI / 4.0).rem_euclid(TWO_PI))
}

/// Phase shift via trig-basis coefficients sampled at `r_base`, `2 r_base`,
/// `4 r_base` with Richardson extrapolation of the `O(1/r)` coefficient drift.
/// Needs `k r_base >> 1`; used as an independent cross-check of the main route.
pub fn phase_shift_trig(pot: &SectorPotential, k: f64, r_base: f64) -> Result<f64> {
    if !(k > 0.0 && k * r_base > 20.0) {
        return Err(Error::Domain(format!(
            "trig extraction needs k r >> 1 (got k r = {})",
            k * r_base
        )));
    }
    let k2 = Complex64::new(k * k, 0.0);
    let rs = [r_base, 2.0 * r_base, 4.0 * r_base];
    let samples = regular_solution(pot, k2, &rs)?;
    let mut acs = [0.0; 3];
    let mut ass = [0.0; 3];
    for (i, s) in samples.iter().enumerate() {
        let (ac, asn) = trig_coefficients(s.r, s.u.re, s.du.re, k);
        acs[i] = ac;
        ass[i] = asn;
    }
    // eliminate 1/r and 1/r^2: (8 f(h/4) - 6 f(h/2) + f(h)) / 3
    let extrap = |f: &[f64; 3]| (8.0 * f[2] - 6.0 * f[1] + f[0]) / 3.0;
    let (ac, asn) = (extrap(&acs), extrap(&ass));
    Ok(f64::atan2(ac, asn).rem_euclid(TWO_PI))
}

/// Continuously unwrapped phase-shift curve on a decreasing wavenumber grid.
#[derive(Debug, Clone)]
pub struct PhaseShiftCurve {
    pub ks: Vec<f64>,
    pub sigma_sr: Vec<f64>,
    /// raw value of the first grid point in `[0, 2 pi)` (branch anchor)
    pub anchor: f64,
}

impl PhaseShiftCurve {
    /// Regression slope of the phase against `-ln k`; tends to `sigma` at
    /// threshold in an oscillatory sector.
    pub fn slope_vs_minus_ln_k(&self) -> Result<f64> {
        let xs: Vec<f64> = self.ks.iter().map(|k| -k.ln()).collect();
        Ok(linear_fit(&xs, &self.sigma_sr)?.0)
    }
}

/// Compute and unwrap the phase shift over a strictly decreasing `ks` grid.
/// Raw jumps of `pi/2` or more indicate undersampling and are rejected.
pub fn phase_shift_curve(pot: &SectorPotential, ks: &[f64]) -> Result<PhaseShiftCurve> {
    if ks.len() < 2 || ks.windows(2).any(|w| !(w[1] < w[0]) || !(w[1] > 0.0)) {
        return Err(Error::Domain(
            "wavenumber grid must be strictly decreasing and positive".into(),
        ));
    }
    let mut sigma_sr = Vec::with_capacity(ks.len());
    let mut anchor = 0.0;
    for (i, &k) in ks.iter().enumerate() {
        let raw = phase_shift(pot, k)?;
        if i == 0 {
            anchor = raw;
            sigma_sr.push(raw);
        } else {
            let prev = sigma_sr[i - 1];
            let d = wrap_pm_pi(raw - prev.rem_euclid(TWO_PI));
            if d.abs() >= PI / 2.0 {
                return Err(Error::Undersampled(format!(
                    "phase jump {:.3} at k = {k}; refine the grid",
                    d.abs()
                )));
            }
            sigma_sr.push(prev + d);
        }
    }
    Ok(PhaseShiftCurve {
        ks: ks.to_vec(),
        sigma_sr,
        anchor,
    })
}

// ---------------------------------------------------------------------------
// threshold asymptotics
// ---------------------------------------------------------------------------

/// Result of fitting the threshold law
/// `s(k) = -sigma ln k + periodic_phase(sigma, sigma ln k + c1) + c2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoticFit {
    /// phase offset of the periodic term; identifiable modulo `pi`
    pub c1: f64,
    /// additive constant (real; compare modulo `2 pi` across branch anchors)
    pub c2: f64,
    pub residual_trace: Vec<f64>,
    pub rms_residual: f64,
}

/// Least squares over `c1` (periodic offset; 64-point scan plus golden
/// refinement) with `c2` concentrated out as the mean residual.
pub fn fit_threshold_asymptotics(curve: &PhaseShiftCurve, sigma: f64) -> Result<AsymptoticFit> {
    let n = curve.ks.len();
    if n < 16 {
        return Err(Error::Fit("need at least 16 curve points".into()));
    }
    let ts: Vec<f64> = curve.ks.iter().map(|k| sigma * k.ln()).collect();
    let detrended: Vec<f64> = curve
        .sigma_sr
        .iter()
        .zip(&ts)
        .map(|(s, t)| s + t)
        .collect();
    // Two passes: centering before squaring keeps the variance resolvable near
    // the optimum, where the one-pass form loses everything to cancellation.
    let cost = |c1: f64| -> f64 {
        let es: Vec<f64> = detrended
            .iter()
            .zip(&ts)
            .map(|(d, &t)| d - periodic_phase(sigma, t + c1).unwrap_or(f64::NAN))
            .collect();
        let mean = es.iter().sum::<f64>() / n as f64;
        es.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n as f64
    };
    // the periodic term has period pi in its offset
    let step = PI / 64.0;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..64 {
        let c1 = i as f64 * step;
        let v = cost(c1);
        if v < best.1 {
            best = (c1, v);
        }
    }
    let (c1, _) = golden_min(cost, best.0 - step, best.0 + step, 1e-13);
    let c1 = c1.rem_euclid(PI);
    let es: Vec<f64> = detrended
        .iter()
        .zip(&ts)
        .map(|(d, &t)| d - periodic_phase(sigma, t + c1).unwrap_or(f64::NAN))
        .collect();
    let c2 = es.iter().sum::<f64>() / n as f64;
    let residual_trace: Vec<f64> = es.iter().map(|e| (e - c2).abs()).collect();
    let rms = (residual_trace.iter().map(|r| r * r).sum::<f64>() / n as f64).sqrt();
    Ok(AsymptoticFit {
        c1,
        c2,
        residual_trace,
        rms_residual: rms,
    })
}

/// The boundary coefficient and predicted threshold constants of a potential
/// whose perturbation is compactly supported.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdConstants {
    pub boundary_coefficient: Complex64,
    pub theta0: f64,
    pub c1: f64,
    pub c2: f64,
    pub r_support: f64,
}

/// Boundary coefficient of the zero-energy regular solution evaluated at `r`:
/// `D = 2^nu r^(1/2-nu)/Gamma(1-nu) ((1/2-nu) u(r)/r - u'(r))`, `nu = -i sigma`.
pub fn boundary_coefficient_at(pot: &SectorPotential, r: f64) -> Result<Complex64> {
    let sigma = pot.sector().sigma()?;
    let nu = Complex64::new(0.0, -sigma);
    let s = regular_solution(pot, Complex64::new(0.0, 0.0), &[r])?[0];
    let pref = ((nu * 2f64.ln()) + (0.5 - nu) * r.ln()).exp() / gamma(1.0 - nu)?;
    let bracket = (0.5 - nu) * s.u / r - s.du;
    let d = pref * bracket;
    let scale = pref.norm() * (s.u.norm() / r + s.du.norm());
    if d.norm() < 1e-10 * scale.max(1e-300) {
        return Err(Error::DenominatorZero(
            "zero-energy boundary coefficient vanishes".into(),
        ));
    }
    Ok(d)
}

/// Predicted threshold constants for a compactly supported perturbation.
pub fn theoretical_constants(pot: &SectorPotential) -> Result<ThresholdConstants> {
    let r_support = pot.pert_support_end().ok_or_else(|| {
        Error::Domain("threshold constants require a compactly supported perturbation".into())
    })?;
    let d = boundary_coefficient_at(pot, r_support)?;
    let theta0 = d.arg().rem_euclid(TWO_PI);
    Ok(ThresholdConstants {
        boundary_coefficient: d,
        theta0,
        c1: theta0,
        c2: (0.75 * PI - theta0).rem_euclid(TWO_PI),
        r_support,
    })
}

/// The predicted threshold phase curve (continuous branch) from the constants.
pub fn threshold_phase_prediction(sigma: f64, theta0: f64, k: f64) -> Result<f64> {
    Ok(-sigma * k.ln() + periodic_phase(sigma, sigma * k.ln() + theta0)? + 0.75 * PI - theta0)
}

// ---------------------------------------------------------------------------
// physical phase shift and the semiclassical comparison
// ---------------------------------------------------------------------------

/// Dimensional offset between the reduced half-line phase and the physical
/// one: `(d - 3 + 2 l) pi / 4`.
pub fn physical_phase_offset(dimension: u32, angular_momentum: u32) -> f64 {
    (dimension as f64 - 3.0 + 2.0 * angular_momentum as f64) * PI / 4.0
}

/// Physical phase shift at energy `lambda > 0` for the sector potential.
pub fn physical_phase_shift(pot: &SectorPotential, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("energy must be positive: {lambda}")));
    }
    let sector = pot.sector();
    Ok(phase_shift(pot, lambda.sqrt())?
        + physical_phase_offset(sector.dimension(), sector.angular_momentum()))
}

/// Semiclassical excess-phase integral for an attractive tail `-g r^(-mu)`:
/// `I = int_r0^inf (sqrt(lambda + g r^(-mu)) - sqrt(lambda)) dr`, convergent
/// for `mu > 1`.  For `mu = 2` it diverges like `-sqrt(g) ln sqrt(lambda)` as
/// `lambda -> 0` — with slope `sqrt(g)`, not the true phase slope `sigma`.
pub fn wkb_phase_integral(g: f64, mu: f64, lambda: f64, r0: f64) -> Result<f64> {
    if !(mu > 1.0) {
        return Err(Error::Domain(format!(
            "excess-phase integral diverges for tail exponent {mu} <= 1"
        )));
    }
    if !(g > 0.0 && lambda > 0.0 && r0 > 0.0) {
        return Err(Error::Domain(
            "tail strength, energy, and inner radius must be positive".into(),
        ));
    }
    // integrate on a log grid out to where the expansion in
    // x = g r^(-mu)/lambda converges fast, then sum the tail series
    let r1 = ((g / lambda).powf(1.0 / mu) * 1e4).max(100.0 * r0);
    let sqrt_l = lambda.sqrt();
    let f = |x: f64| {
        let r = x.exp();
        ((lambda + g * r.powf(-mu)).sqrt() - sqrt_l) * r
    };
    let main = simpson(f, r0.ln(), r1.ln(), 2400);
    let x1 = g / (lambda * r1.powf(mu));
    let tail = sqrt_l
        * x1
        * r1
        * (0.5 / (mu - 1.0) - x1 / (8.0 * (2.0 * mu - 1.0))
            + x1 * x1 / (16.0 * (3.0 * mu - 1.0)));
    Ok(main + tail)
}

/// Closed form of the excess-phase integral for the critical tail `mu = 2`.
pub fn wkb_integral_inverse_square(g: f64, lambda: f64, r0: f64) -> f64 {
    let q0 = (lambda * r0 * r0 + g).sqrt();
    lambda.sqrt() * r0 + g.sqrt() * (g.sqrt() / q0).atanh() - q0
}

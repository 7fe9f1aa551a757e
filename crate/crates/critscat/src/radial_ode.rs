//! The half-line radial equation `-u'' + v(r) u = k^2 u`.
//!
//! The regular solution is started at a small radius from a truncated Frobenius
//! expansion `u = sum_j c_j r^(1/2 + kappa + e_j)` (exact term recursion for the
//! bundled potentials, whose head structure is known in closed form), then
//! carried outward by the adaptive integrator: in the variable `t = ln r` while
//! `r <= 2`, where the `1/r^2` backbone turns into a smooth bounded coefficient,
//! and in plain `r` beyond.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{DormandPrince, State};
use crate::potentials::SectorPotential;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Radius separating the logarithmic and plain integration variables.
pub const LOG_LEG_END: f64 = 2.0;

/// Reports from `propagate` below this radius are refused: the plain-variable
/// leg is not meant to fight the `1/r^2` backbone.
const PROPAGATE_FLOOR: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub r: f64,
    pub u: Complex64,
    /// du/dr
    pub du: Complex64,
}

/// `u1 u2' - u1' u2` evaluated from two samples at the same radius.
pub fn wronskian(a: &RadialSample, b: &RadialSample) -> Complex64 {
    a.u * b.du - a.du * b.u
}

/// Truncated Frobenius expansion of the regular solution about `r = 0`,
/// normalized so the leading coefficient is 1.
#[derive(Debug, Clone)]
pub struct FrobeniusSeries {
    kappa: f64,
    /// `(e_j, c_j)` with `u = sum c_j r^(1/2 + kappa + e_j)`, sorted by exponent
    terms: Vec<(f64, Complex64)>,
}

/// Build the expansion for the equation
/// `-u'' + ((kappa^2 - 1/4)/r^2 + beta r^(-2+eps)) u = k2 u` near the origin.
/// The term recursion is
/// `c(e) = (beta c(e - eps) - k2 c(e - 2)) / (e (2 kappa + e))`.
pub fn frobenius_series(
    kappa: f64,
    head: Option<(f64, f64)>,
    k2: Complex64,
    e_max: f64,
) -> FrobeniusSeries {
    let mut terms: Vec<(f64, Complex64)> = vec![(0.0, ONE)];
    let deposit = |terms: &mut Vec<(f64, Complex64)>, e: f64, c: Complex64, after: usize| {
        if e > e_max || c.norm() < 1e-300 {
            return;
        }
        for slot in terms.iter_mut().skip(after) {
            if (slot.0 - e).abs() < 1e-9 {
                slot.1 += c;
                return;
            }
        }
        terms.push((e, c));
    };
    let mut i = 0;
    while i < terms.len() {
        terms[i..].sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let (e, c) = terms[i];
        let e2 = e + 2.0;
        deposit(&mut terms, e2, -k2 * c / (e2 * (2.0 * kappa + e2)), i + 1);
        if let Some((beta, eps)) = head {
            let eh = e + eps;
            deposit(
                &mut terms,
                eh,
                beta * c / (eh * (2.0 * kappa + eh)),
                i + 1,
            );
        }
        i += 1;
    }
    FrobeniusSeries { kappa, terms }
}

impl FrobeniusSeries {
    /// `(u, du/dr)` at radius `r`.
    pub fn eval(&self, r: f64) -> (Complex64, Complex64) {
        let p = 0.5 + self.kappa;
        let mut u = Complex64::new(0.0, 0.0);
        let mut du = Complex64::new(0.0, 0.0);
        for &(e, c) in &self.terms {
            let pw = r.powf(p + e);
            u += c * pw;
            du += c * (p + e) * pw / r;
        }
        (u, du)
    }

    /// Size of the largest retained high-order term relative to the leading one;
    /// a proxy for the truncation error at radius `r`.
    pub fn tail_ratio(&self, r: f64) -> f64 {
        if self.terms.len() == 1 {
            // The recursion produced no corrections (zero energy, unperturbed
            // head): the one-term series is an exact solution.
            return 0.0;
        }
        let cutoff = self.terms.iter().map(|t| t.0).fold(0.0, f64::max) - 2.0;
        self.terms
            .iter()
            .filter(|t| t.0 >= cutoff)
            .map(|&(e, c)| c.norm() * r.powf(e))
            .fold(0.0, f64::max)
    }
}

fn validate_reports(reports: &[f64]) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::Domain("no report radii given".into()));
    }
    let mut prev = 0.0;
    for &r in reports {
        if !(r > prev) || !r.is_finite() {
            return Err(Error::Domain(
                "report radii must be finite, positive, strictly increasing".into(),
            ));
        }
        prev = r;
    }
    Ok(())
}

/// The regular solution (normalized to `r^(1/2+kappa)` at the origin) sampled
/// at the given strictly increasing radii.
pub fn regular_solution(
    pot: &SectorPotential,
    k2: Complex64,
    reports: &[f64],
) -> Result<Vec<RadialSample>> {
    let origin = pot.origin_data();
    let start = 0.05 / (1.0 + k2.norm().sqrt());
    regular_solution_from(pot, k2, reports, start.min(origin.valid_up_to / 2.0))
}

/// Same, with an explicit series hand-off radius (exposed so consistency across
/// hand-off radii can be tested).
pub fn regular_solution_from(
    pot: &SectorPotential,
    k2: Complex64,
    reports: &[f64],
    start: f64,
) -> Result<Vec<RadialSample>> {
    validate_reports(reports)?;
    let origin = pot.origin_data();
    if !(start > 0.0) || start > origin.valid_up_to {
        return Err(Error::Domain(format!(
            "series hand-off radius {start} outside (0, {}]",
            origin.valid_up_to
        )));
    }
    let head = if origin.coeff != 0.0 {
        Some((origin.coeff, origin.exponent))
    } else {
        None
    };
    let series = frobenius_series(origin.kappa, head, k2, 20.0);
    let tail = series.tail_ratio(start);
    if tail > 1e-13 {
        return Err(Error::PrecisionLoss {
            what: "frobenius series truncation at hand-off radius",
            estimate: tail,
            limit: 1e-13,
        });
    }

    let mut out = Vec::with_capacity(reports.len());
    let mut remaining: Vec<f64> = Vec::new();
    for &r in reports {
        if r <= start {
            let (u, du) = series.eval(r);
            out.push(RadialSample { r, u, du });
        } else {
            remaining.push(r);
        }
    }
    if remaining.is_empty() {
        return Ok(out);
    }

    let ivp = DormandPrince::default();
    let (u0, du0) = series.eval(start);
    let mut state: State = [u0, start * du0];
    let mut r_here = start;

    // leg in t = ln r up to LOG_LEG_END (or the last report if it is nearer)
    let log_end = LOG_LEG_END.min(*remaining.last().unwrap());
    if log_end > r_here {
        let mut ts: Vec<f64> = remaining
            .iter()
            .filter(|&&r| r <= log_end)
            .map(|&r| r.ln())
            .collect();
        let t_end = log_end.ln();
        let needs_synthetic_end = ts.last().map_or(true, |&t| t < t_end - 1e-15);
        if needs_synthetic_end {
            ts.push(t_end);
        }
        let rhs = |t: f64, y: &State| {
            let r = t.exp();
            [y[1], y[1] + r * r * (pot.v(r) - k2) * y[0]]
        };
        state = ivp.integrate(rhs, r_here.ln(), state, &ts, |t, y| {
            let r = t.exp();
            // skip the synthetic leg-end landing unless it was requested
            if remaining.iter().any(|&q| (q - r).abs() < 1e-12 * q) {
                out.push(RadialSample {
                    r,
                    u: y[0],
                    du: y[1] / r,
                });
            }
        })?;
        r_here = log_end;
    }

    // plain-variable leg beyond
    let plain: Vec<f64> = remaining.iter().copied().filter(|&r| r > r_here).collect();
    if !plain.is_empty() {
        let st: State = [state[0], state[1] / r_here];
        let rhs = |r: f64, y: &State| [y[1], (pot.v(r) - k2) * y[0]];
        ivp.integrate(rhs, r_here, st, &plain, |r, y| {
            out.push(RadialSample {
                r,
                u: y[0],
                du: y[1],
            });
        })?;
    }

    out.sort_by(|a, b| a.r.total_cmp(&b.r));
    if out.len() != reports.len() {
        return Err(Error::Domain(
            "internal: report bookkeeping mismatch in regular_solution".into(),
        ));
    }
    Ok(out)
}

/// Carry given Cauchy data at `r_from` to the listed radii (monotone away from
/// `r_from`, in either direction), in the plain variable.
pub fn propagate(
    pot: &SectorPotential,
    k2: Complex64,
    from: RadialSample,
    reports: &[f64],
) -> Result<Vec<RadialSample>> {
    if reports.is_empty() {
        return Err(Error::Domain("no report radii given".into()));
    }
    if reports.iter().any(|&r| r < PROPAGATE_FLOOR) {
        return Err(Error::Domain(format!(
            "propagate is restricted to r >= {PROPAGATE_FLOOR}; use regular_solution near the origin"
        )));
    }
    let ivp = DormandPrince::default();
    let rhs = |r: f64, y: &State| [y[1], (pot.v(r) - k2) * y[0]];
    let mut out = Vec::with_capacity(reports.len());
    ivp.integrate(rhs, from.r, [from.u, from.du], reports, |r, y| {
        out.push(RadialSample {
            r,
            u: y[0],
            du: y[1],
        });
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{PotentialSpec, SectorPotential};
    use crate::sectors::Sector;
    use approx::assert_abs_diff_eq;

    fn pure() -> SectorPotential {
        SectorPotential::new(Sector::new(3, 0, 1.25).unwrap(), PotentialSpec::Pure).unwrap()
    }

    #[test]
    fn free_region_matches_sine_oracle() {
        // kappa = 1/2 and v = 0 below the cutoff: u = sin(k r)/k exactly
        let pot = pure();
        for &k2 in &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.09, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-1.0, 0.0),
        ] {
            let k = k2.sqrt();
            let reports = [0.01, 0.2, 0.5, 0.9, 1.0];
            let got = regular_solution(&pot, k2, &reports).unwrap();
            for s in got {
                let exact = (k * s.r).sin() / k;
                let exact_d = (k * s.r).cos();
                assert_abs_diff_eq!(s.u.re, exact.re, epsilon = 1e-10 * (1.0 + exact.norm()));
                assert_abs_diff_eq!(s.u.im, exact.im, epsilon = 1e-10 * (1.0 + exact.norm()));
                assert_abs_diff_eq!(s.du.re, exact_d.re, epsilon = 1e-9 * (1.0 + exact_d.norm()));
                assert_abs_diff_eq!(s.du.im, exact_d.im, epsilon = 1e-9 * (1.0 + exact_d.norm()));
            }
        }
    }

    #[test]
    fn frobenius_solves_equation_pointwise() {
        // 5-point finite-difference residual of the series itself
        let k2 = Complex64::new(1.0, 0.5);
        let series = frobenius_series(0.5, Some((0.1, 0.5)), k2, 20.0);
        let v = |r: f64| 0.1 * r.powf(-1.5); // kappa = 1/2 kills the angular term
        let r = 0.3;
        let h = 1e-3;
        let u = |r: f64| series.eval(r).0;
        let d2 = (-u(r + 2.0 * h) + 16.0 * u(r + h) - 30.0 * u(r) + 16.0 * u(r - h)
            - u(r - 2.0 * h))
            / (12.0 * h * h);
        let res = -d2 + (v(r) - k2) * u(r);
        assert!(res.norm() < 1e-9 * u(r).norm(), "residual {:.3e}", res.norm());
    }

    #[test]
    fn hand_off_radius_does_not_matter() {
        for spec in [PotentialSpec::Pure, PotentialSpec::singular_head()] {
            let pot =
                SectorPotential::new(Sector::new(3, 0, 1.25).unwrap(), spec).unwrap();
            let k2 = Complex64::new(0.49, 0.0);
            let a = regular_solution_from(&pot, k2, &[5.0], 0.04).unwrap();
            let b = regular_solution_from(&pot, k2, &[5.0], 0.008).unwrap();
            let rel = (a[0].u - b[0].u).norm() / a[0].u.norm();
            assert!(rel < 1e-9, "{}: rel = {rel:.3e}", pot.spec().name());
            let reld = (a[0].du - b[0].du).norm() / (a[0].du.norm() + 1e-30);
            assert!(reld < 1e-8, "{}: reld = {reld:.3e}", pot.spec().name());
        }
    }

    #[test]
    fn propagate_round_trip() {
        let pot = pure();
        let k2 = Complex64::new(0.49, 0.0);
        let fwd = regular_solution(&pot, k2, &[2.0, 6.0]).unwrap();
        let back = propagate(&pot, k2, fwd[1], &[4.0, 2.0]).unwrap();
        let rel = (back[1].u - fwd[0].u).norm() / fwd[0].u.norm();
        assert!(rel < 1e-9, "rel = {rel:.3e}");
        assert!(back[0].r == 4.0 && back[1].r == 2.0);
        assert!(propagate(&pot, k2, fwd[0], &[0.1]).is_err());
    }

    #[test]
    fn log_leg_crosses_transition_consistently() {
        // sample densely across the variable switch and check the equation by
        // a Wronskian of two solutions with the same k^2: it must be constant
        let pot = pure();
        let k2 = Complex64::new(1.21, 0.0);
        // second solution: same equation, different Cauchy data at r = 1
        let s1 = regular_solution(&pot, k2, &[1.0, 1.5, 2.0, 2.5, 3.0, 5.0]).unwrap();
        let seed = RadialSample {
            r: 1.0,
            u: Complex64::new(1.0, 0.0),
            du: Complex64::new(0.0, 0.0),
        };
        let s2 = propagate(&pot, k2, seed, &[1.5, 2.0, 2.5, 3.0, 5.0]).unwrap();
        let w0 = wronskian(&s1[0], &seed);
        for (a, b) in s1[1..].iter().zip(&s2) {
            assert!((a.r - b.r).abs() < 1e-12);
            let w = wronskian(a, b);
            assert_abs_diff_eq!(w.re, w0.re, epsilon = 1e-9 * w0.norm());
            assert_abs_diff_eq!(w.im, w0.im, epsilon = 1e-9 * w0.norm());
        }
    }
}

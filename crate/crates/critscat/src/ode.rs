//! Adaptive Dormand-Prince 5(4) integration for two-component complex systems.
//!
//! Every initial-value problem in this crate (the radial equation in either the
//! plain or logarithmic variable, and the variation-of-parameters coefficient
//! flow) is a first-order system on `[Complex64; 2]`, so the integrator is
//! specialized to that state type.  Report points are landed on exactly by
//! clipping the step, never by interpolation.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type State = [Complex64; 2];

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub rtol: f64,
    /// absolute tolerance, expressed relative to the running solution scale
    pub atol_scale: f64,
    pub max_steps: usize,
    /// solutions larger than this magnitude abort with a blowup error
    pub blowup: f64,
}

impl Default for DormandPrince {
    fn default() -> Self {
        DormandPrince {
            rtol: 1e-11,
            atol_scale: 1e-2,
            max_steps: 4_000_000,
            blowup: 1e250,
        }
    }
}

fn lincomb(y: &State, ks: &[State], coef: &[f64], h: f64) -> State {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coef) {
        if c != 0.0 {
            out[0] += h * c * k[0];
            out[1] += h * c * k[1];
        }
    }
    out
}

impl DormandPrince {
    /// Integrate `dy/dt = f(t, y)` from `(t0, y0)`, calling `on_report` at every
    /// point of `reports` (which must be strictly monotone, all on the same side
    /// of `t0`, ordered in the direction of integration).  Returns the state at
    /// the final report point.
    pub fn integrate<F, R>(
        &self,
        f: F,
        t0: f64,
        y0: State,
        reports: &[f64],
        mut on_report: R,
    ) -> Result<State>
    where
        F: Fn(f64, &State) -> State,
        R: FnMut(f64, &State),
    {
        let t_end = *reports.last().ok_or_else(|| {
            Error::Domain("integrate: empty report list".into())
        })?;
        let dir = (t_end - t0).signum();
        if dir == 0.0 {
            return Err(Error::Domain("integrate: zero integration span".into()));
        }
        let mut prev = t0;
        for &r in reports {
            if (r - prev) * dir <= 0.0 {
                return Err(Error::Domain(
                    "integrate: reports must be strictly monotone away from t0".into(),
                ));
            }
            prev = r;
        }

        let mut t = t0;
        let mut y = y0;
        // controller-owned natural step; report landings clip the attempted step
        // without disturbing it
        let mut h_nat = 1e-4 * (1.0 + t0.abs());
        let mut next_report = 0usize;
        for _ in 0..self.max_steps {
            let remaining = (reports[next_report] - t).abs();
            let clipped = h_nat >= remaining;
            let h = dir * if clipped { remaining } else { h_nat };
            if h.abs() < 1e-14 * (1.0 + t.abs()) {
                return Err(Error::StepUnderflow { x: t, h: h.abs() });
            }

            let k1 = f(t, &y);
            let k2 = f(t + C[0] * h, &lincomb(&y, &[k1], &A2, h));
            let k3 = f(t + C[1] * h, &lincomb(&y, &[k1, k2], &A3, h));
            let k4 = f(t + C[2] * h, &lincomb(&y, &[k1, k2, k3], &A4, h));
            let k5 = f(t + C[3] * h, &lincomb(&y, &[k1, k2, k3, k4], &A5, h));
            let k6 = f(t + C[4] * h, &lincomb(&y, &[k1, k2, k3, k4, k5], &A6, h));
            let ks6 = [k1, k2, k3, k4, k5, k6];
            let y5 = lincomb(&y, &ks6, &B5[..6], h);
            let k7 = f(t + h, &y5);
            let ks = [k1, k2, k3, k4, k5, k6, k7];
            let y4 = lincomb(&y, &ks, &B4, h);

            let scale0 = self.atol_scale * (y[0].norm() + y[1].norm())
                + y[0].norm().max(y5[0].norm());
            let scale1 = self.atol_scale * (y[0].norm() + y[1].norm())
                + y[1].norm().max(y5[1].norm());
            let err0 = (y5[0] - y4[0]).norm() / (self.rtol * scale0 + f64::MIN_POSITIVE);
            let err1 = (y5[1] - y4[1]).norm() / (self.rtol * scale1 + f64::MIN_POSITIVE);
            let err = err0.max(err1);

            if err <= 1.0 {
                t += h;
                y = y5;
                if y[0].norm() > self.blowup || y[1].norm() > self.blowup {
                    return Err(Error::Blowup {
                        x: t,
                        magnitude: y[0].norm().max(y[1].norm()),
                    });
                }
                if clipped {
                    on_report(reports[next_report], &y);
                    next_report += 1;
                    if next_report == reports.len() {
                        return Ok(y);
                    }
                }
            }
            // a clipped step that succeeded says nothing about the natural step;
            // any failed or natural step updates the controller
            if !clipped || err > 1.0 {
                let grow = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                h_nat = h.abs() * grow;
            }
        }
        Err(Error::Domain(format!(
            "integrate: step budget exhausted at t = {t}"
        )))
    }
}

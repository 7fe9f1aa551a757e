//! Small dense solves, 1-D searches, and extrapolation helpers.
//!
//! Everything here operates on problems of dimension at most a few dozen, so
//! plain Gaussian elimination with partial pivoting and direct normal equations
//! are entirely adequate.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solve `A x = b` in place by Gaussian elimination with partial pivoting.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Fit("solve_linear: shape mismatch".into()));
    }
    for col in 0..n {
        let (pivot, pmax) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pmax == 0.0 {
            return Err(Error::Fit("solve_linear: singular matrix".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let m = a[r][col] / a[col][col];
            if m != 0.0 {
                for c in col..n {
                    a[r][c] -= m * a[col][c];
                }
                b[r] -= m * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Ok(x)
}

/// Least squares via normal equations: `design` is row-major with one row per
/// observation.
pub fn lstsq(design: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = design.len();
    if m == 0 || m != rhs.len() {
        return Err(Error::Fit("lstsq: empty or mismatched input".into()));
    }
    let p = design[0].len();
    let mut ata = vec![vec![0.0; p]; p];
    let mut atb = vec![0.0; p];
    for (row, &y) in design.iter().zip(rhs) {
        if row.len() != p {
            return Err(Error::Fit("lstsq: ragged design matrix".into()));
        }
        for i in 0..p {
            atb[i] += row[i] * y;
            for j in 0..p {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    solve_linear(ata, atb)
}

/// Ordinary least squares line through `(x, y)` points: returns `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Fit("linear_fit needs >= 2 paired points".into()));
    }
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 1.0]).collect();
    let c = lstsq(&rows, ys)?;
    Ok((c[0], c[1]))
}

/// Golden-section minimum of a unimodal function on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fc < fx && fc < fd {
        (c, fc)
    } else if fd < fx {
        (d, fd)
    } else {
        (x, fx)
    }
}

/// Bisection root of `f` on `[a, b]`; requires a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootFinding(format!(
            "bisect: no sign change on [{a}, {b}] (f = {fa:.3e}, {fb:.3e})"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol * (1.0 + m.abs()) {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Nelder-Mead downhill simplex in `n` dimensions; returns the best vertex.
/// Good enough for the 2-parameter nonlinear fits used here.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    scale: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    for _ in 0..max_iter {
        // order best..worst
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let ordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let ordered_vals: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = ordered;
        values = ordered_vals;
        if (values[n] - values[0]).abs() <= 1e-14 * (1.0 + values[0].abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|v| v[d]).sum::<f64>() / n as f64)
            .collect();
        let blend = |alpha: f64| -> Vec<f64> {
            (0..n)
                .map(|d| centroid[d] + alpha * (simplex[n][d] - centroid[d]))
                .collect()
        };
        let reflected = blend(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = blend(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = blend(0.5);
            let fc = f(&contracted);
            if fc < values[n] {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    for d in 0..n {
                        simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    (simplex[best].clone(), values[best])
}

/// One Richardson step: given `coarse = F(h)` and `fine = F(h / ratio)` for a
/// quantity with error `~ h^order`, return the extrapolated limit.
pub fn richardson(coarse: Complex64, fine: Complex64, ratio: f64, order: f64) -> Complex64 {
    let q = ratio.powf(order);
    (q * fine - coarse) / (q - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn solves_small_system() {
        let a = vec![
            vec![2.0, 1.0, -1.0],
            vec![-3.0, -1.0, 2.0],
            vec![-2.0, 1.0, 2.0],
        ];
        let x = solve_linear(a, vec![8.0, -11.0, -3.0]).unwrap();
        assert_abs_diff_eq!(x[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[2], -1.0, epsilon = 1e-12);
        assert!(solve_linear(vec![vec![1.0, 1.0], vec![2.0, 2.0]], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn least_squares_recovers_exact_model() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64 / 7.0).collect();
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x * x, x, 1.0]).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 0.5 * x * x - 2.0 * x + 0.25).collect();
        let c = lstsq(&rows, &ys).unwrap();
        assert_abs_diff_eq!(c[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(c[1], -2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c[2], 0.25, epsilon = 1e-10);
        let (m, b) = linear_fit(&xs, &xs.iter().map(|x| 3.0 * x - 1.0).collect::<Vec<_>>()).unwrap();
        assert_abs_diff_eq!(m, 3.0, epsilon = 1e-11);
        assert_abs_diff_eq!(b, -1.0, epsilon = 1e-11);
    }

    #[test]
    fn golden_finds_quadratic_minimum() {
        // localization of a quadratic minimum saturates near sqrt(machine eps)
        let (x, fx) = golden_min(|x| (x - 2.0) * (x - 2.0) + 1.0, -5.0, 7.0, 1e-10);
        assert_abs_diff_eq!(x, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(fx, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn bisect_finds_cos_root() {
        let r = bisect(|x: f64| x.cos(), 0.0, 3.0, 1e-13).unwrap();
        assert_abs_diff_eq!(r, std::f64::consts::FRAC_PI_2, epsilon = 1e-11);
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn nelder_mead_minimizes_bowl() {
        let f = |v: &[f64]| (v[0] - 1.5) * (v[0] - 1.5) + 3.0 * (v[1] + 0.5) * (v[1] + 0.5);
        let (x, fx) = nelder_mead(f, &[0.0, 0.0], 0.7, 300);
        assert_abs_diff_eq!(x[0], 1.5, epsilon = 1e-6);
        assert_abs_diff_eq!(x[1], -0.5, epsilon = 1e-6);
        assert!(fx < 1e-11);
    }

    #[test]
    fn richardson_removes_leading_error() {
        // F(h) = L + c h^2 + d h^4
        let eval = |h: f64| Complex64::new(3.0 + 0.7 * h * h + 0.1 * h * h * h * h, 0.0);
        let ex = richardson(eval(0.2), eval(0.1), 2.0, 2.0);
        assert_relative_eq!(ex.re, 3.0, max_relative = 2e-5);
        assert!((ex.re - 3.0).abs() < (eval(0.1).re - 3.0).abs() / 50.0);
    }
}

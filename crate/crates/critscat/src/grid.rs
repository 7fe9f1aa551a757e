//! Grids and elementary quadrature.

/// `n >= 2` equally spaced points including both endpoints.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Logarithmically spaced points from `a` to `b` (both positive) with the given
/// resolution per decade; endpoints included.
pub fn log_spaced(a: f64, b: f64, per_decade: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a, "log_spaced needs 0 < a < b");
    assert!(per_decade >= 1);
    let la = a.log10();
    let lb = b.log10();
    let n = (((lb - la) * per_decade as f64).ceil() as usize).max(1) + 1;
    (0..n)
        .map(|i| 10f64.powf(la + (lb - la) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Trapezoid quadrature weights on an arbitrary strictly increasing grid.
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    assert!(n >= 2, "need at least two nodes");
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = grid[i + 1] - grid[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}

/// Composite Simpson rule with `2n` intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let m = 2 * n.max(1);
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Composite Simpson split at an interior point where the integrand has a kink:
/// each side is integrated separately so the rule never straddles `split`.
pub fn simpson_split<F: Fn(f64) -> f64>(f: F, a: f64, split: f64, b: f64, n_each: usize) -> f64 {
    assert!(a <= split && split <= b);
    let mut acc = 0.0;
    if split > a {
        acc += simpson(&f, a, split, n_each);
    }
    if b > split {
        acc += simpson(&f, split, b, n_each);
    }
    acc
}

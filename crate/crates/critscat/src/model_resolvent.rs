//! The model operator: Dirichlet half-line problem on `(1, inf)` with the
//! exactly critical potential `(nu^2 - 1/4)/r^2`, `nu = -i sigma`.
//!
//! Its resolvent kernel factorizes through two explicit solutions,
//!
//! * the regular one, vanishing at the boundary with unit slope,
//!   `phi_k(r) = (pi / (2 sin(nu pi))) r^(1/2) (J_(-nu)(k) J_nu(kr) - J_nu(k) J_(-nu)(kr))`,
//! * the outgoing one, `phi_plus(r) = r^(1/2) H1_nu(kr) / H1_nu(k)`,
//!
//! as `R_k(r, r') = phi_k(min) phi_plus(max)`; their Wronskian is exactly -1, so
//! no normalizing division appears.  As `k -> 0` on the fixed branch the kernel
//! approaches a limit kernel plus a *log-periodically oscillating rank-one term*
//! `zeta(k) phi_0 (x) phi_0`, where `phi_0 = r^(1/2) sin(sigma ln r)/sigma` is the
//! zero-energy solution and `zeta` never settles: it is invariant under
//! `ln k -> ln k + pi/sigma`.  The negative spectrum mirrors this scaling as a
//! geometric ladder `E_n = -kappa_n^2` with `K_(i sigma)(kappa_n) = 0`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fit::bisect;
use crate::grid::{log_spaced, trapezoid_weights};
use crate::specfun::{
    bessel_j, bessel_j_dz, bessel_k_imag_order, bessel_leading_coeff, hankel1, hankel1_dz,
    BranchedWavenumber,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Zero-energy Dirichlet solution `phi_0(r) = r^(1/2) sin(sigma ln r)/sigma`
/// (boundary values `phi_0(1) = 0`, `phi_0'(1) = 1`).
pub fn zero_energy_solution(sigma: f64, r: f64) -> f64 {
    r.sqrt() * (sigma * r.ln()).sin() / sigma
}

/// Companion zero-energy solution `psi_0(r) = r^(1/2) cos(sigma ln r)`.
pub fn zero_energy_cosine(sigma: f64, r: f64) -> f64 {
    r.sqrt() * (sigma * r.ln()).cos()
}

fn nu_of(sigma: f64) -> Result<Complex64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    Ok(Complex64::new(0.0, -sigma))
}

/// Regular Dirichlet solution and its radial derivative at `r >= 1`.
pub fn regular_dirichlet(
    sigma: f64,
    k: &BranchedWavenumber,
    r: f64,
) -> Result<(Complex64, Complex64)> {
    let nu = nu_of(sigma)?;
    let kv = k.value();
    let z = kv * r;
    let jm_k = bessel_j(-nu, kv)?;
    let jp_k = bessel_j(nu, kv)?;
    let jp = bessel_j(nu, z)?;
    let jm = bessel_j(-nu, z)?;
    let djp = bessel_j_dz(nu, z)?;
    let djm = bessel_j_dz(-nu, z)?;
    let c = PI / (2.0 * (nu * PI).sin());
    let sr = r.sqrt();
    let mix = jm_k * jp - jp_k * jm;
    let dmix = kv * (jm_k * djp - jp_k * djm);
    Ok((c * sr * mix, c * (0.5 / sr * mix + sr * dmix)))
}

/// Outgoing Dirichlet solution and its radial derivative at `r >= 1`.
pub fn outgoing_dirichlet(
    sigma: f64,
    k: &BranchedWavenumber,
    r: f64,
) -> Result<(Complex64, Complex64)> {
    let nu = nu_of(sigma)?;
    let kv = k.value();
    let z = kv * r;
    let h_k = hankel1(nu, kv)?;
    let h = hankel1(nu, z)?;
    let dh = hankel1_dz(nu, z)?;
    let sr = r.sqrt();
    Ok((
        sr * h / h_k,
        (0.5 / sr * h + sr * kv * dh) / h_k,
    ))
}

/// Resolvent kernel of the model operator at spectral parameter `k^2`.
pub fn resolvent_kernel(
    sigma: f64,
    k: &BranchedWavenumber,
    r: f64,
    rp: f64,
) -> Result<Complex64> {
    if r < 1.0 || rp < 1.0 {
        return Err(Error::Domain(format!(
            "model kernel lives on (1, inf)^2, got ({r}, {rp})"
        )));
    }
    let (lo, hi) = if r <= rp { (r, rp) } else { (rp, r) };
    Ok(regular_dirichlet(sigma, k, lo)?.0 * outgoing_dirichlet(sigma, k, hi)?.0)
}

/// The `k`-independent part of the low-energy kernel expansion:
/// `F(r, r') = phi_0(min) psi_0(max) + i sigma phi_0(r) phi_0(r')`.
pub fn limit_kernel(sigma: f64, r: f64, rp: f64) -> Complex64 {
    let (lo, hi) = if r <= rp { (r, rp) } else { (rp, r) };
    let base = zero_energy_solution(sigma, lo) * zero_energy_cosine(sigma, hi);
    let rank1 = zero_energy_solution(sigma, r) * zero_energy_solution(sigma, rp);
    Complex64::new(base, sigma * rank1)
}

/// `beta(k) = e^(-sigma pi) (D/D_bar) k^(2 nu)` - the oscillation carrier.
fn oscillation_carrier(sigma: f64, k: &BranchedWavenumber) -> Result<Complex64> {
    let nu = nu_of(sigma)?;
    let d = bessel_leading_coeff(nu)?;
    let d_bar = bessel_leading_coeff(-nu)?;
    Ok((-sigma * PI).exp() * (d / d_bar) * k.powc(2.0 * nu))
}

/// The oscillation factor `zeta(k)` multiplying the rank-one term
/// `phi_0 (x) phi_0` in the low-energy expansion:
/// `zeta = 2 i sigma e^(-sigma pi) D k^(2 nu) / (D_bar - D e^(-sigma pi) k^(2 nu))`.
pub fn oscillation_factor(sigma: f64, k: &BranchedWavenumber) -> Result<Complex64> {
    let beta = oscillation_carrier(sigma, k)?;
    Ok(2.0 * I * sigma * beta / (1.0 - beta))
}

/// Denominator `D_bar - D e^(-sigma pi) k^(2 nu)` of the oscillation factor,
/// whose zeros on the positive imaginary axis shadow the eigenvalue ladder.
pub fn oscillation_denominator(sigma: f64, k: &BranchedWavenumber) -> Result<Complex64> {
    let nu = nu_of(sigma)?;
    let d = bessel_leading_coeff(nu)?;
    let d_bar = bessel_leading_coeff(-nu)?;
    Ok(d_bar - d * (-sigma * PI).exp() * k.powc(2.0 * nu))
}

/// Weighted remainder of the rank-one expansion, as an operator norm.
///
/// Samples `E_k = R_k - F - zeta(k) phi_0 (x) phi_0` on a log grid over
/// `[1, 10/|k|]`, forms the matrix of `<r>^(-weight) E <r'>^(-weight)` with
/// trapezoid square-root weights on both sides, and returns its spectral
/// norm (power iteration).  This discretizes the operator norm from the
/// weighted space into its dual, which is the pairing in which the remainder
/// decays like `|k|^(s'-1)` for every `1 < s' < weight`.
pub fn expansion_remainder_norm(
    sigma: f64,
    k: &BranchedWavenumber,
    weight: f64,
    per_decade: usize,
) -> Result<f64> {
    let r_hi = 10.0 / k.modulus();
    if r_hi <= 1.5 {
        return Err(Error::Domain(format!(
            "expansion window empty: |k| = {} too large",
            k.modulus()
        )));
    }
    let grid = log_spaced(1.0, r_hi, per_decade.max(8));
    let w = trapezoid_weights(&grid);
    let zeta = oscillation_factor(sigma, k)?;
    let n = grid.len();

    // regular/outgoing values along the grid (kernel factorizes, so O(n) evals)
    let mut reg = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for &r in &grid {
        reg.push(regular_dirichlet(sigma, k, r)?.0);
        out.push(outgoing_dirichlet(sigma, k, r)?.0);
    }

    let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        let ri = grid[i];
        let wi = w[i].sqrt() * (1.0 + ri * ri).powf(-weight / 2.0);
        for j in 0..n {
            let rj = grid[j];
            let wj = w[j].sqrt() * (1.0 + rj * rj).powf(-weight / 2.0);
            let kernel = if i <= j { reg[i] * out[j] } else { reg[j] * out[i] };
            let e = kernel
                - limit_kernel(sigma, ri, rj)
                - zeta * zero_energy_solution(sigma, ri) * zero_energy_solution(sigma, rj);
            a[i][j] = wi * wj * e;
        }
    }

    // power iteration on A^H A for the spectral norm
    let mut rng = ChaCha8Rng::seed_from_u64(0x0051_EC7E);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut norm_est = 0.0;
    for _ in 0..80 {
        // u = A v
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += a[i][j] * v[j];
            }
            u[i] = acc;
        }
        // v = A^H u
        let mut vn = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += a[i][j].conj() * u[i];
            }
            vn[j] = acc;
        }
        let nrm = vn.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return Ok(0.0);
        }
        for z in &mut vn {
            *z /= nrm;
        }
        norm_est = nrm.sqrt(); // |A^H A v| ~ s_max^2
        v = vn;
    }
    Ok(norm_est)
}

/// Decreasing zeros `kappa_1 > kappa_2 > ...` of `x -> K_(i sigma)(x)`: the
/// model operator's bound states sit at `E_n = -kappa_n^2`, accumulating
/// geometrically at zero with ratio `e^(-pi/sigma)`.
pub fn dirichlet_ladder(sigma: f64, levels: usize) -> Result<Vec<f64>> {
    if levels == 0 {
        return Ok(Vec::new());
    }
    let f = |t: f64| bessel_k_imag_order(sigma, t.exp()).unwrap_or(f64::NAN);
    // K_(i sigma) is positive beyond its largest zero; start safely to the right
    let t_hi = (2.0 * sigma + 2.0).ln();
    let step = PI / sigma / 64.0;
    let mut zeros = Vec::with_capacity(levels);
    let mut t = t_hi;
    let mut ft = f(t);
    while zeros.len() < levels {
        let t_next = t - step;
        if t_next.exp() < 1e-280 {
            return Err(Error::RootFinding(format!(
                "ladder scan left the representable range after {} of {} levels",
                zeros.len(),
                levels
            )));
        }
        let ft_next = f(t_next);
        if !ft.is_finite() || !ft_next.is_finite() {
            return Err(Error::RootFinding("K evaluation failed in ladder scan".into()));
        }
        if ft * ft_next < 0.0 {
            let root_t = bisect(f, t_next, t, 1e-14)?;
            zeros.push(root_t.exp());
        }
        t = t_next;
        ft = ft_next;
    }
    Ok(zeros)
}

/// The negative eigenvalues `E_n = -kappa_n^2` of the model operator.
pub fn negative_eigenvalue_ladder(sigma: f64, levels: usize) -> Result<Vec<f64>> {
    Ok(dirichlet_ladder(sigma, levels)?
        .into_iter()
        .map(|k| -k * k)
        .collect())
}

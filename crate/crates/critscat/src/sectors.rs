//! Decomposition of `-Delta - gamma/|x|^2` on `R^d` into radial sectors.
//!
//! After separating spherical harmonics of degree `l` and the unitary map to
//! half-line form, each sector is governed by the radial operator
//! `-d^2/dr^2 + (kappa^2 - 1/4 - gamma)/r^2 + ...` with `kappa = l + d/2 - 1`.
//! A sector is *oscillatory* when `gamma > kappa^2`; its solutions near the
//! origin behave like `r^(1/2) e^(+-i sigma ln r)` with
//! `sigma = sqrt(gamma - kappa^2)`, and the whole low-energy phenomenology
//! (geometric eigenvalue ladders, log-periodic phase shifts) lives there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative margin around the transition `gamma = kappa^2` inside which the
/// coupling is rejected as numerically borderline.
pub const BORDERLINE_MARGIN: f64 = 1e-9;

/// Classification of a single radial sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SectorClass {
    /// `gamma > kappa^2`: solutions oscillate in `ln r` with rate `sigma`.
    Oscillatory { sigma: f64 },
    /// `gamma < kappa^2`: power behavior `r^(1/2 +- nu)` with real `nu > 0`.
    Decaying { nu: f64 },
}

/// One angular momentum sector of the critically scaling operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    dimension: u32,
    angular_momentum: u32,
    gamma: f64,
}

impl Sector {
    pub fn new(dimension: u32, angular_momentum: u32, gamma: f64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "dimension must be >= 2, got {dimension}"
            )));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain(format!(
                "coupling gamma must be positive and finite, got {gamma}"
            )));
        }
        let s = Sector {
            dimension,
            angular_momentum,
            gamma,
        };
        // reject couplings indistinguishable from the oscillatory transition
        let d = (gamma - s.kappa() * s.kappa()).abs();
        if d <= BORDERLINE_MARGIN * (1.0 + gamma) {
            return Err(Error::BorderlineGamma {
                gamma,
                threshold: s.kappa() * s.kappa(),
            });
        }
        Ok(s)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn angular_momentum(&self) -> u32 {
        self.angular_momentum
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `kappa = l + d/2 - 1`, the effective order parameter of the sector.
    pub fn kappa(&self) -> f64 {
        self.angular_momentum as f64 + self.dimension as f64 / 2.0 - 1.0
    }

    /// `nu^2 = kappa^2 - gamma`; negative in oscillatory sectors.
    pub fn nu_squared(&self) -> f64 {
        self.kappa() * self.kappa() - self.gamma
    }

    pub fn class(&self) -> SectorClass {
        let n2 = self.nu_squared();
        if n2 < 0.0 {
            SectorClass::Oscillatory { sigma: (-n2).sqrt() }
        } else {
            SectorClass::Decaying { nu: n2.sqrt() }
        }
    }

    /// Oscillation rate, or an error if the sector is not oscillatory.
    pub fn sigma(&self) -> Result<f64> {
        match self.class() {
            SectorClass::Oscillatory { sigma } => Ok(sigma),
            SectorClass::Decaying { .. } => Err(Error::NotOscillatory {
                nu_squared: self.nu_squared(),
            }),
        }
    }

    /// The planar s-wave `(d, l) = (2, 0)` has `kappa = 0`: it is oscillatory for
    /// every positive coupling, no matter how small.
    pub fn is_planar_s_wave(&self) -> bool {
        self.dimension == 2 && self.angular_momentum == 0
    }
}

/// The set of oscillatory angular momenta `{ l : kappa_l^2 < gamma }`.
/// `kappa_l` is increasing in `l`, so this is `{0, 1, ..., m-1}`.
pub fn oscillatory_momenta(dimension: u32, gamma: f64) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    let mut l = 0u32;
    loop {
        let kappa = l as f64 + dimension as f64 / 2.0 - 1.0;
        if kappa * kappa >= gamma {
            break;
        }
        // each member must also be safely away from the transition
        Sector::new(dimension, l, gamma)?;
        out.push(l);
        l += 1;
    }
    // the first excluded sector must be safely non-oscillatory too
    Sector::new(dimension, l, gamma)?;
    Ok(out)
}

/// `C(n, k)` with the vanishing convention for `n < k` or `n < 0`; `None` on
/// u128 overflow.
fn binomial_u128(n: i64, k: i64) -> Option<u128> {
    if n < 0 || k < 0 || k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Multiplicity of spherical harmonics of degree `l` on the sphere `S^(d-1)`:
/// `C(l+d-3, d-2) + C(l+d-2, d-2)` for `d >= 2` (binomials with upper index
/// below the lower vanish, which covers the planar cases).
pub fn harmonic_multiplicity(dimension: u32, l: u32) -> Result<u128> {
    let d = dimension as i64;
    let l = l as i64;
    if d < 2 {
        return Err(Error::Domain(format!(
            "dimension must be >= 2, got {dimension}"
        )));
    }
    let over = Error::MultiplicityOverflow {
        d: dimension,
        m: l as u32,
    };
    let a = binomial_u128(l + d - 3, d - 2).ok_or(over.clone())?;
    let b = binomial_u128(l + d - 2, d - 2).ok_or(over.clone())?;
    a.checked_add(b).ok_or(over)
}

/// Which power of `k` controls the next-to-leading term of low-energy
/// expansions, set by the first non-oscillatory exponent `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NextOrderScale {
    /// `mu in (0,1)`: a `k^(2 mu)` term beats the regular `k^2` correction.
    PowerTwoMu,
    /// `mu = 1` (within margin): logarithmic resonance, `k^2 ln k`.
    KSquaredLog,
    /// `mu > 1`: the regular `k^2` term dominates.
    KSquared,
}

/// Summary of the full angular decomposition at a given coupling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub dimension: u32,
    pub gamma: f64,
    /// oscillatory angular momenta `{0, ..., m-1}`
    pub oscillatory: Vec<u32>,
    /// total multiplicity of the oscillatory subspace
    pub oscillatory_multiplicity: u128,
    /// oscillation rates per oscillatory `l`
    pub sigmas: Vec<f64>,
    /// exponent `mu = sqrt(kappa_m^2 - gamma)` of the first decaying sector
    pub first_decaying_exponent: f64,
    /// multiplicity of that first decaying sector
    pub first_decaying_multiplicity: u128,
    pub next_order_scale: NextOrderScale,
    /// whether the first decaying sector can carry a threshold resonance (`mu <= 1`)
    pub resonance_capable: bool,
}

pub fn decompose(dimension: u32, gamma: f64) -> Result<Decomposition> {
    let oscillatory = oscillatory_momenta(dimension, gamma)?;
    let m = oscillatory.len() as u32;
    let mut mult: u128 = 0;
    let mut sigmas = Vec::new();
    for &l in &oscillatory {
        mult = mult
            .checked_add(harmonic_multiplicity(dimension, l)?)
            .ok_or(Error::MultiplicityOverflow { d: dimension, m })?;
        sigmas.push(Sector::new(dimension, l, gamma)?.sigma()?);
    }
    let first = Sector::new(dimension, m, gamma)?;
    let mu = first.nu_squared().sqrt();
    let scale = if (mu - 1.0).abs() < 1e-12 {
        NextOrderScale::KSquaredLog
    } else if mu < 1.0 {
        NextOrderScale::PowerTwoMu
    } else {
        NextOrderScale::KSquared
    };
    Ok(Decomposition {
        dimension,
        gamma,
        oscillatory,
        oscillatory_multiplicity: mult,
        sigmas,
        first_decaying_exponent: mu,
        first_decaying_multiplicity: harmonic_multiplicity(dimension, m)?,
        next_order_scale: scale,
        resonance_capable: mu <= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn three_dimensional_reference_sector() {
        // d = 3, gamma = 1.25: s-wave has kappa = 1/2, sigma = 1
        let s = Sector::new(3, 0, 1.25).unwrap();
        assert_abs_diff_eq!(s.kappa(), 0.5);
        assert_abs_diff_eq!(s.nu_squared(), -1.0);
        assert_abs_diff_eq!(s.sigma().unwrap(), 1.0);
        // p-wave is already decaying: kappa = 3/2, nu = 1
        let p = Sector::new(3, 1, 1.25).unwrap();
        assert!(matches!(p.class(), SectorClass::Decaying { nu } if (nu - 1.0).abs() < 1e-15));
        assert!(p.sigma().is_err());
    }

    #[test]
    fn planar_s_wave_always_oscillates() {
        for &g in &[1e-6, 0.1, 3.0] {
            let s = Sector::new(2, 0, g).unwrap();
            assert!(s.is_planar_s_wave());
            assert_abs_diff_eq!(s.sigma().unwrap(), g.sqrt(), epsilon = 1e-15);
        }
        assert!(!Sector::new(2, 1, 0.5).unwrap().is_planar_s_wave());
        assert!(!Sector::new(3, 0, 1.0).unwrap().is_planar_s_wave());
    }

    #[test]
    fn borderline_couplings_rejected() {
        // d = 3, l = 1: transition at gamma = 2.25
        assert!(matches!(
            Sector::new(3, 1, 2.25),
            Err(Error::BorderlineGamma { .. })
        ));
        assert!(matches!(
            Sector::new(3, 1, 2.25 + 1e-12),
            Err(Error::BorderlineGamma { .. })
        ));
        assert!(Sector::new(3, 1, 2.25 + 1e-6).is_ok());
        assert!(matches!(
            decompose(3, 2.25),
            Err(Error::BorderlineGamma { .. })
        ));
    }

    #[test]
    fn oscillatory_set_and_multiplicities() {
        // d = 3, gamma = 1.25: only l = 0 oscillates; first decaying sector l = 1
        let d = decompose(3, 1.25).unwrap();
        assert_eq!(d.oscillatory, vec![0]);
        assert_eq!(d.oscillatory_multiplicity, 1);
        assert_abs_diff_eq!(d.sigmas[0], 1.0);
        assert_abs_diff_eq!(d.first_decaying_exponent, 1.0);
        assert_eq!(d.first_decaying_multiplicity, 3);
        assert_eq!(d.next_order_scale, NextOrderScale::KSquaredLog);
        assert!(d.resonance_capable);

        // d = 3, gamma = 2.5: l = 0 and l = 1 oscillate
        let d = decompose(3, 2.5).unwrap();
        assert_eq!(d.oscillatory, vec![0, 1]);
        assert_eq!(d.oscillatory_multiplicity, 1 + 3);
        assert_abs_diff_eq!(d.sigmas[0], 1.5);
        assert_abs_diff_eq!(d.sigmas[1], 0.5);
        assert_abs_diff_eq!(d.first_decaying_exponent, 3.75f64.sqrt(), epsilon = 1e-15);
        assert_eq!(d.first_decaying_multiplicity, 5);
        assert_eq!(d.next_order_scale, NextOrderScale::KSquared);
        assert!(!d.resonance_capable);
    }

    #[test]
    fn harmonic_multiplicity_known_values() {
        // d = 3: 2l + 1
        for l in 0..6 {
            assert_eq!(harmonic_multiplicity(3, l).unwrap(), (2 * l + 1) as u128);
        }
        // d = 2: 1, then 2
        assert_eq!(harmonic_multiplicity(2, 0).unwrap(), 1);
        assert_eq!(harmonic_multiplicity(2, 1).unwrap(), 2);
        assert_eq!(harmonic_multiplicity(2, 7).unwrap(), 2);
        // d = 4: (l+1)^2
        for l in 0..5 {
            assert_eq!(
                harmonic_multiplicity(4, l).unwrap(),
                ((l + 1) * (l + 1)) as u128
            );
        }
        // overflow is an error, not a wrap
        assert!(matches!(
            harmonic_multiplicity(200, u32::MAX),
            Err(Error::MultiplicityOverflow { .. })
        ));
    }

    #[test]
    fn small_coupling_large_dimension_has_no_oscillatory_sector() {
        let d = decompose(5, 0.4).unwrap();
        assert!(d.oscillatory.is_empty());
        assert_eq!(d.oscillatory_multiplicity, 0);
        assert_abs_diff_eq!(d.first_decaying_exponent, (2.25f64 - 0.4).sqrt());
    }
}

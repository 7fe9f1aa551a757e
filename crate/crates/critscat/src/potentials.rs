//! Half-line sector potentials with an exactly critical `-gamma/r^2` tail.
//!
//! In a sector with effective order `kappa = l + d/2 - 1` and coupling `gamma`,
//! the half-line potential is assembled as
//!
//! ```text
//! v(r) = (kappa^2 - 1/4)/r^2 - gamma * chi(r)^2/r^2 + w(r)
//! ```
//!
//! where `chi` is a smooth cutoff rising from 0 to 1 across `[1, 2]` and `w` is
//! one of the bundled perturbations.  The squared cutoff pairs with its exact
//! complement `chi_<^2 = 1 - chi^2`, so the deviation from the critical tail can
//! be assembled without cancellation.  Beyond the cutoff the potential agrees
//! (exactly, or up to a declared power tail) with the critical reference
//! `v_model(r) = (nu^2 - 1/4)/r^2`, `nu^2 = kappa^2 - gamma`; near the origin it
//! agrees with the free angular term up to a declared mildly singular head.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::sectors::Sector;

/// `C^inf` step: 0 for `s <= 0`, 1 for `s >= 1`, strictly increasing between.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / s).exp();
        let b = (-1.0 / (1.0 - s)).exp();
        a / (a + b)
    }
}

/// Cutoff rising 0 -> 1 across `[a, b]`, built as `sin((pi/2) * step)` so that
/// `rising^2 + falling^2 = 1`.  The saturated branches are returned exactly
/// (`cos(pi/2)` rounds to 6e-17, which would leak outside the support).
pub fn rising_cutoff(r: f64, a: f64, b: f64) -> f64 {
    let s = smooth_step((r - a) / (b - a));
    if s == 0.0 {
        0.0
    } else if s == 1.0 {
        1.0
    } else {
        (FRAC_PI_2 * s).sin()
    }
}

/// Complementary cutoff falling 1 -> 0 across `[a, b]`.
pub fn falling_cutoff(r: f64, a: f64, b: f64) -> f64 {
    let s = smooth_step((r - a) / (b - a));
    if s == 0.0 {
        1.0
    } else if s == 1.0 {
        0.0
    } else {
        (FRAC_PI_2 * s).cos()
    }
}

/// Bundled perturbation families on top of the critically scaling backbone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum PotentialSpec {
    /// No perturbation: the backbone alone.
    Pure,
    /// A smooth bump supported on `[1, 3]`.
    CompactBump { amplitude: f64 },
    /// `amplitude * r^(-2-decay) * chi(r)`: the tail is critical only to leading
    /// order, with a declared power correction.
    PowerTail { amplitude: f64, decay: f64 },
    /// `amplitude * r^(-2+head) * chi_<(r)` supported on `r <= 1`: mildly
    /// singular at the origin but weaker than the angular term.
    SingularHead { amplitude: f64, head: f64 },
}

impl PotentialSpec {
    pub fn compact_bump() -> Self {
        PotentialSpec::CompactBump { amplitude: 0.5 }
    }

    pub fn power_tail() -> Self {
        PotentialSpec::PowerTail {
            amplitude: 0.1,
            decay: 1.0,
        }
    }

    pub fn singular_head() -> Self {
        PotentialSpec::SingularHead {
            amplitude: 0.1,
            head: 0.5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PotentialSpec::Pure => "pure",
            PotentialSpec::CompactBump { .. } => "compact-bump",
            PotentialSpec::PowerTail { .. } => "power-tail",
            PotentialSpec::SingularHead { .. } => "singular-head",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::Pure => Ok(()),
            PotentialSpec::CompactBump { amplitude } => {
                if amplitude.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain("bump amplitude must be finite".into()))
                }
            }
            PotentialSpec::PowerTail { amplitude, decay } => {
                if !amplitude.is_finite() {
                    return Err(Error::Domain("tail amplitude must be finite".into()));
                }
                if !(decay > 0.0) {
                    return Err(Error::Domain(format!(
                        "tail decay exponent must be positive, got {decay}"
                    )));
                }
                Ok(())
            }
            PotentialSpec::SingularHead { amplitude, head } => {
                if !amplitude.is_finite() {
                    return Err(Error::Domain("head amplitude must be finite".into()));
                }
                if !(head > 0.0 && head <= 2.0) {
                    return Err(Error::Domain(format!(
                        "head exponent must lie in (0, 2], got {head}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Exact structure of the potential near the origin: for `r <= valid_up_to`,
/// `v(r) = (kappa^2 - 1/4)/r^2 + coeff * r^(-2+exponent)` identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginData {
    pub kappa: f64,
    pub coeff: f64,
    pub exponent: f64,
    pub valid_up_to: f64,
}

/// Exact structure of the tail: for `r >= start`,
/// `v(r) = v_model(r) + coeff * r^(-2-exponent)` identically (coeff may be 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailData {
    pub start: f64,
    pub coeff: f64,
    pub exponent: f64,
}

/// A sector potential: backbone plus bundled perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorPotential {
    sector: Sector,
    spec: PotentialSpec,
}

impl SectorPotential {
    pub fn new(sector: Sector, spec: PotentialSpec) -> Result<Self> {
        spec.validate()?;
        Ok(SectorPotential { sector, spec })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    /// The critical reference `(nu^2 - 1/4)/r^2` with `nu^2 = kappa^2 - gamma`.
    pub fn v_model(&self, r: f64) -> f64 {
        (self.sector.nu_squared() - 0.25) / (r * r)
    }

    fn w(&self, r: f64) -> f64 {
        match self.spec {
            PotentialSpec::Pure => 0.0,
            PotentialSpec::CompactBump { amplitude } => {
                let s = (r - 1.0) / 2.0;
                if s <= 0.0 || s >= 1.0 {
                    0.0
                } else {
                    // normalized so the peak value at r = 2 is `amplitude`
                    amplitude * (4.0 - 1.0 / s - 1.0 / (1.0 - s)).exp()
                }
            }
            PotentialSpec::PowerTail { amplitude, decay } => {
                amplitude * r.powf(-2.0 - decay) * rising_cutoff(r, 1.0, 2.0).powi(2)
            }
            PotentialSpec::SingularHead { amplitude, head } => {
                amplitude * r.powf(-2.0 + head) * falling_cutoff(r, 0.5, 1.0).powi(2)
            }
        }
    }

    /// The full half-line potential.
    pub fn v(&self, r: f64) -> f64 {
        let kappa = self.sector.kappa();
        (kappa * kappa - 0.25 - self.sector.gamma() * rising_cutoff(r, 1.0, 2.0).powi(2)) / (r * r)
            + self.w(r)
    }

    /// `v - v_model`, assembled without cancellation as
    /// `gamma chi_<(r)^2/r^2 + w(r)`.  Vanishes identically beyond the cutoff
    /// for compactly perturbed specs.
    pub fn v_pert(&self, r: f64) -> f64 {
        self.sector.gamma() * falling_cutoff(r, 1.0, 2.0).powi(2) / (r * r) + self.w(r)
    }

    pub fn origin_data(&self) -> OriginData {
        let (coeff, exponent) = match self.spec {
            PotentialSpec::SingularHead { amplitude, head } => (amplitude, head),
            _ => (0.0, 2.0),
        };
        OriginData {
            kappa: self.sector.kappa(),
            coeff,
            exponent,
            valid_up_to: 0.5,
        }
    }

    pub fn tail_data(&self) -> TailData {
        match self.spec {
            PotentialSpec::PowerTail { amplitude, decay } => TailData {
                start: 2.0,
                coeff: amplitude,
                exponent: decay,
            },
            _ => TailData {
                start: if matches!(self.spec, PotentialSpec::CompactBump { .. }) {
                    3.0
                } else {
                    2.0
                },
                coeff: 0.0,
                exponent: f64::INFINITY,
            },
        }
    }

    /// End of the support of `v_pert`, if it is compactly supported.
    pub fn pert_support_end(&self) -> Option<f64> {
        match self.spec {
            PotentialSpec::PowerTail { .. } => None,
            PotentialSpec::CompactBump { .. } => Some(3.0),
            _ => Some(2.0),
        }
    }

    /// Check the decay and head conditions on a log grid over `[1e-6, 1e6]`.
    ///
    /// The weighted deviations `|v - v_model| r^(2+eps1)` (tail side) and
    /// `|v - angular| r^(2-eps2)` (head side) must not grow toward the ends of
    /// the grid; growth means a mis-declared exponent.
    pub fn verify_conditions(&self) -> Result<ConditionsReport> {
        let tail = self.tail_data();
        let origin = self.origin_data();
        let eps1 = if tail.exponent.is_finite() {
            tail.exponent
        } else {
            1.0
        };
        let eps2 = origin.exponent.min(2.0);
        let kappa = origin.kappa;

        let per_decade = 64;
        let decades = 12; // 1e-6 .. 1e6
        let mut tail_by_decade = vec![0.0f64; decades];
        let mut head_by_decade = vec![0.0f64; decades];
        let mut tail_sup = 0.0f64;
        let mut head_sup = 0.0f64;
        for j in 0..decades * per_decade {
            let x = -6.0 + j as f64 / per_decade as f64;
            let r = 10f64.powf(x);
            let d = j / per_decade;
            if r >= 1.0 {
                let dev = self.v_pert(r).abs() * r.powf(2.0 + eps1);
                tail_by_decade[d] = tail_by_decade[d].max(dev);
                tail_sup = tail_sup.max(dev);
            }
            if r <= 1.0 {
                let dev = (self.v(r) - (kappa * kappa - 0.25) / (r * r)).abs() * r.powf(2.0 - eps2);
                head_by_decade[d] = head_by_decade[d].max(dev);
                head_sup = head_sup.max(dev);
            }
        }
        // toward r -> inf the weighted tail deviation must be non-increasing
        for d in 8..decades - 1 {
            if tail_by_decade[d + 1] > 1.01 * tail_by_decade[d] + 1e-12 * tail_sup {
                return Err(Error::Domain(format!(
                    "tail condition fails: weighted deviation grows past r = 1e{}",
                    d as i32 - 6
                )));
            }
        }
        // toward r -> 0 the weighted head deviation must be non-increasing
        for d in (1..4).rev() {
            if head_by_decade[d - 1] > 1.01 * head_by_decade[d] + 1e-12 * head_sup {
                return Err(Error::Domain(format!(
                    "head condition fails: weighted deviation grows below r = 1e{}",
                    d as i32 - 6
                )));
            }
        }
        Ok(ConditionsReport {
            tail_exponent: eps1,
            tail_constant: tail_sup,
            head_exponent: eps2,
            head_constant: head_sup,
        })
    }
}

/// Certified decay data: `|v - v_model| <= tail_constant * r^(-2-tail_exponent)`
/// on the sampled tail, and `|v - angular| <= head_constant * r^(-2+head_exponent)`
/// on the sampled head.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConditionsReport {
    pub tail_exponent: f64,
    pub tail_constant: f64,
    pub head_exponent: f64,
    pub head_constant: f64,
}

//! Numerics for radial Schrodinger operators `-u'' + V u` whose potential decays like
//! `-gamma / r^2` at infinity with `gamma` above the oscillatory threshold.
//!
//! In that regime the reduced angular-momentum order `nu = -i*sigma` is purely
//! imaginary and the low-energy behaviour is log-periodic instead of power-like:
//! the resolvent carries an oscillatory rank-one term, the Dirichlet model operator
//! has a geometric ladder of negative eigenvalues, and the phase shift diverges like
//! `-sigma * ln k` with a periodic correction.  The modules below build that picture
//! from the ground up:
//!
//! * [`specfun`] - complex gamma, Bessel/Hankel functions of imaginary order,
//!   `K_{i sigma}`, the periodic phase function, and branch-aware powers `k^w`.
//! * [`sectors`] - spherical-sector reduction and threshold classification.
//! * [`potentials`] - smooth cutoffs and the bundled potential family.
//! * [`radial_ode`] - Frobenius starts, adaptive integration, variation-of-parameters
//!   coefficient flows in power / trigonometric / Hankel bases.
//! * [`model_resolvent`] - the explicit half-line model resolvent, its low-energy
//!   expansion with the oscillatory Moebius coefficient, and the eigenvalue ladder.
//! * [`greens`] - Green kernels for the full operator, low-energy sweeps, and the
//!   rank-one oscillation fit.
//! * [`scattering`] - phase shifts, threshold asymptotics, and the semiclassical
//!   comparison integral.
//! * [`verify`] - the end-to-end acceptance checks used by the CLI and test suite.

pub mod error;
pub mod fit;
pub mod greens;
pub mod grid;
pub mod model_resolvent;
pub mod ode;
pub mod potentials;
pub mod radial_ode;
pub mod scattering;
pub mod sectors;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

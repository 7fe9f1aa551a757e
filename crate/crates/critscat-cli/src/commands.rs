//! Implementations of the `critscat` subcommands.
//!
//! Each command resolves its inputs from an [`ExperimentConfig`] (already
//! layered with environment and flag overrides), computes through the library
//! crate, and writes deterministic CSV or JSON artifacts.  Independent
//! wavenumber sweeps honor `--jobs`; results are collected in grid order, so
//! output bytes do not depend on scheduling.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use critscat::greens::{fit_oscillation, greens_at_pairs, OscillationFit};
use critscat::model_resolvent::{dirichlet_ladder, expansion_remainder_norm};
use critscat::potentials::SectorPotential;
use critscat::radial_ode::regular_solution;
use critscat::scattering::{
    angle_distance, fit_threshold_asymptotics, phase_shift_curve, theoretical_constants,
    wkb_phase_integral, AsymptoticFit, PhaseShiftCurve, ThresholdConstants,
};
use critscat::sectors::{decompose, harmonic_multiplicity, Decomposition, Sector, SectorClass};
use critscat::specfun::{
    bessel_j, bessel_k_imag_order, hankel1, periodic_phase, BranchedWavenumber,
};
use critscat::verify;

use crate::config::{self, ConfigError, ExperimentConfig};
use crate::output::{csv, fmt_f64, json, Dest};

const TWO_PI: f64 = 2.0 * PI;

/// Everything that can go wrong running a command.  Configuration and usage
/// problems exit with status 2; computation, tolerance, and verification
/// failures exit with status 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Lib(#[from] critscat::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("fit residual {got} exceeds tolerances.max_fit_residual = {tol}")]
    Tolerance { got: f64, tol: f64 },
    #[error("verification failed: {failed} of {total} criteria")]
    VerifyFailed { failed: usize, total: usize },
    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Output routing and parallelism shared by all commands.
pub struct Io {
    /// `--out` destination for the primary artifact (`-` for stdout).
    pub out: Option<PathBuf>,
    /// worker threads for independent sweeps; 1 means fully sequential.
    pub jobs: usize,
}

fn emit(dest: &Dest, content: &str) -> Result<(), CliError> {
    dest.write(content).map_err(|e| CliError::Write {
        path: match dest {
            Dest::Stdout => "<stdout>".into(),
            Dest::File(p) => p.display().to_string(),
        },
        source: e,
    })
}

/// Map `f` over `items`, in parallel when `jobs > 1`, preserving input order.
fn par_map<T, U, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<U>, CliError>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> critscat::Result<U> + Sync + Send,
{
    if jobs <= 1 {
        Ok(items.iter().map(&f).collect::<critscat::Result<_>>()?)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build a {jobs}-thread pool: {e}")))?;
        Ok(pool.install(|| {
            items
                .par_iter()
                .map(&f)
                .collect::<critscat::Result<Vec<_>>>()
        })?)
    }
}

// ---------------------------------------------------------------------------
// sector
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SectorRecord {
    sector: Sector,
    kappa: f64,
    class: SectorClass,
    /// oscillation rate when the sector is oscillatory
    sigma: Option<f64>,
    harmonic_multiplicity: u128,
    /// full angular decomposition at this dimension and coupling
    threshold_classification: Decomposition,
}

pub fn sector(cfg: &ExperimentConfig, io: &Io) -> Result<(), CliError> {
    let sector = cfg.sector()?;
    let record = SectorRecord {
        sector,
        kappa: sector.kappa(),
        class: sector.class(),
        sigma: sector.sigma().ok(),
        harmonic_multiplicity: harmonic_multiplicity(
            sector.dimension(),
            sector.angular_momentum(),
        )?,
        threshold_classification: decompose(sector.dimension(), sector.gamma())?,
    };
    let dest = Dest::primary(io.out.as_deref(), cfg.output.dir.as_deref(), "sector.json");
    emit(&dest, &json(&record)?)
}

// ---------------------------------------------------------------------------
// specfun
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SpecFunction {
    /// Bessel J of the sector's order
    BesselJ,
    /// outgoing Hankel function of the sector's order
    Hankel1,
    /// real modified Bessel K of imaginary order (oscillatory sectors)
    BesselK,
    /// log-periodic phase of the oscillation factor (oscillatory sectors)
    PeriodicPhase,
}

pub struct SpecfunParams {
    pub function: SpecFunction,
    pub inputs: Vec<f64>,
    /// argument angle (radians) applied to bessel-j / hankel1 inputs
    pub arg: f64,
}

pub fn specfun(cfg: &ExperimentConfig, p: &SpecfunParams, io: &Io) -> Result<(), CliError> {
    let sector = cfg.sector()?;
    if p.inputs.is_empty() {
        return Err(CliError::Usage("--inputs is empty".into()));
    }
    let order = match sector.class() {
        SectorClass::Oscillatory { sigma } => Complex64::new(0.0, -sigma),
        SectorClass::Decaying { nu } => Complex64::new(nu, 0.0),
    };
    let needs_real = matches!(
        p.function,
        SpecFunction::BesselK | SpecFunction::PeriodicPhase
    );
    if needs_real && p.arg != 0.0 {
        return Err(CliError::Usage(
            "--arg applies only to bessel-j and hankel1".into(),
        ));
    }
    let mut rows = Vec::with_capacity(p.inputs.len());
    for &x in &p.inputs {
        let value = match p.function {
            SpecFunction::BesselJ => bessel_j(order, Complex64::from_polar(x, p.arg))?,
            SpecFunction::Hankel1 => hankel1(order, Complex64::from_polar(x, p.arg))?,
            SpecFunction::BesselK => {
                Complex64::new(bessel_k_imag_order(sector.sigma()?, x)?, 0.0)
            }
            SpecFunction::PeriodicPhase => {
                Complex64::new(periodic_phase(sector.sigma()?, x)?, 0.0)
            }
        };
        rows.push(vec![x, value.re, value.im]);
    }
    let dest = Dest::primary(io.out.as_deref(), cfg.output.dir.as_deref(), "specfun.csv");
    emit(&dest, &csv("input,re,im", rows))
}

// ---------------------------------------------------------------------------
// model-resolvent and eigenvalues
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LadderRecord {
    sigma: f64,
    levels: usize,
    /// decreasing zeros of `K_(i sigma)`; bound states sit at `-kappa^2`
    kappas: Vec<f64>,
    eigenvalues: Vec<f64>,
    kappa_ratios: Vec<f64>,
    eigenvalue_ratios: Vec<f64>,
    /// limit of successive `kappa` ratios, `e^(-pi/sigma)`
    kappa_accumulation_factor: f64,
    /// limit of successive eigenvalue ratios, `e^(-2 pi/sigma)`
    eigenvalue_accumulation_factor: f64,
}

fn ladder_record(sigma: f64, levels: usize) -> Result<LadderRecord, CliError> {
    let kappas = dirichlet_ladder(sigma, levels)?;
    let eigenvalues: Vec<f64> = kappas.iter().map(|k| -k * k).collect();
    let kappa_ratios = kappas.windows(2).map(|w| w[1] / w[0]).collect();
    let eigenvalue_ratios = eigenvalues.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(LadderRecord {
        sigma,
        levels,
        kappas,
        eigenvalues,
        kappa_ratios,
        eigenvalue_ratios,
        kappa_accumulation_factor: (-PI / sigma).exp(),
        eigenvalue_accumulation_factor: (-TWO_PI / sigma).exp(),
    })
}

pub struct ModelResolventParams {
    /// polynomial weight of the pairing `<r>^(-weight) E <r'>^(-weight)`
    pub weight: f64,
    /// radial quadrature resolution (points per decade)
    pub per_decade: usize,
    /// ladder depth for the companion eigenvalue record
    pub levels: usize,
    pub ladder_out: Option<PathBuf>,
}

pub fn model_resolvent(
    cfg: &ExperimentConfig,
    p: &ModelResolventParams,
    io: &Io,
) -> Result<(), CliError> {
    let sigma = cfg.sector()?.sigma()?;
    if !(p.weight > 1.0) || !p.weight.is_finite() {
        return Err(CliError::Usage(format!(
            "--weight must exceed 1, got {}",
            p.weight
        )));
    }
    if p.per_decade < 4 {
        return Err(CliError::Usage(format!(
            "--per-decade must be at least 4, got {}",
            p.per_decade
        )));
    }
    let ks = cfg.k_grid(sigma)?;
    let errors = par_map(io.jobs, &ks, |&k| {
        expansion_remainder_norm(sigma, &BranchedWavenumber::real(k)?, p.weight, p.per_decade)
    })?;
    let rows = ks
        .iter()
        .zip(&errors)
        .map(|(&k, &e)| vec![k, e])
        .collect::<Vec<_>>();
    let dest = Dest::primary(
        io.out.as_deref(),
        cfg.output.dir.as_deref(),
        "model-resolvent.csv",
    );
    emit(&dest, &csv("abs_k,expansion_error", rows))?;
    if let Some(dest) = Dest::secondary(
        p.ladder_out.as_deref(),
        cfg.output.dir.as_deref(),
        "model-resolvent-ladder.json",
    ) {
        emit(&dest, &json(&ladder_record(sigma, p.levels)?)?)?;
    }
    Ok(())
}

pub fn eigenvalues(cfg: &ExperimentConfig, levels: usize, io: &Io) -> Result<(), CliError> {
    let sigma = cfg.sector()?.sigma()?;
    if levels == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let dest = Dest::primary(
        io.out.as_deref(),
        cfg.output.dir.as_deref(),
        "eigenvalues.json",
    );
    emit(&dest, &json(&ladder_record(sigma, levels)?)?)
}

// ---------------------------------------------------------------------------
// phase-shift and fit-asymptotics
// ---------------------------------------------------------------------------

fn sweep_curve(
    cfg: &ExperimentConfig,
) -> Result<(SectorPotential, f64, PhaseShiftCurve), CliError> {
    let sector = cfg.sector()?;
    let sigma = sector.sigma()?;
    let pot = SectorPotential::new(sector, cfg.potential_spec()?)?;
    let mut ks = cfg.k_grid(sigma)?;
    // the anchored phase continuation runs from the largest wavenumber down
    ks.reverse();
    let curve = phase_shift_curve(&pot, &ks)?;
    Ok((pot, sigma, curve))
}

pub fn phase_shift(cfg: &ExperimentConfig, io: &Io) -> Result<(), CliError> {
    let (_, _, curve) = sweep_curve(cfg)?;
    let rows = curve
        .ks
        .iter()
        .zip(&curve.sigma_sr)
        .map(|(&k, &s)| vec![k.ln(), s])
        .collect::<Vec<_>>();
    let dest = Dest::primary(
        io.out.as_deref(),
        cfg.output.dir.as_deref(),
        "phase-shift.csv",
    );
    emit(&dest, &csv("ln_k,sigma_sr", rows))
}

#[derive(Serialize)]
struct TheoreticalRecord {
    constants: ThresholdConstants,
    /// distance of the fitted periodic offset from `theta0`, modulo `pi`
    c1_distance: f64,
    /// distance of the fitted additive constant from `3 pi/4 - theta0`, modulo `2 pi`
    c2_distance: f64,
}

#[derive(Serialize)]
struct FitRecord {
    sigma: f64,
    potential: String,
    k_min: f64,
    k_max: f64,
    n_points: usize,
    fit: AsymptoticFit,
    /// predicted constants (compactly supported perturbations only)
    theoretical: Option<TheoreticalRecord>,
}

pub fn fit_asymptotics(cfg: &ExperimentConfig, io: &Io) -> Result<(), CliError> {
    let (pot, sigma, curve) = sweep_curve(cfg)?;
    let fit = fit_threshold_asymptotics(&curve, sigma)?;
    let theoretical = theoretical_constants(&pot).ok().map(|constants| TheoreticalRecord {
        c1_distance: angle_distance(fit.c1, constants.c1, PI),
        c2_distance: angle_distance(fit.c2.rem_euclid(TWO_PI), constants.c2, TWO_PI),
        constants,
    });
    let record = FitRecord {
        sigma,
        potential: pot.spec().name().into(),
        k_min: cfg.grid.k_min,
        k_max: cfg.grid.k_max,
        n_points: curve.ks.len(),
        fit,
        theoretical,
    };
    let dest = Dest::primary(
        io.out.as_deref(),
        cfg.output.dir.as_deref(),
        "fit-asymptotics.json",
    );
    emit(&dest, &json(&record)?)?;
    let tol = cfg.tolerances.max_fit_residual;
    if record.fit.rms_residual > tol {
        return Err(CliError::Tolerance {
            got: record.fit.rms_residual,
            tol,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// greens
// ---------------------------------------------------------------------------

pub struct GreensParams {
    pub fit_out: Option<PathBuf>,
    pub solution_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct OscillationRecord {
    sigma: f64,
    pairs: Vec<(f64, f64)>,
    k_min: f64,
    k_max: f64,
    n_points: usize,
    /// predicted Mobius modulus `e^(-sigma pi)`
    expected_mobius_modulus: f64,
    fitted_mobius_modulus: f64,
    fit: OscillationFit,
}

pub fn greens(cfg: &ExperimentConfig, p: &GreensParams, io: &Io) -> Result<(), CliError> {
    let sector = cfg.sector()?;
    let sigma = sector.sigma()?;
    let pot = SectorPotential::new(sector, cfg.potential_spec()?)?;
    let pairs = cfg.probes.pairs.clone();
    if pairs.is_empty() {
        return Err(CliError::Usage("probe pair list is empty".into()));
    }
    let ks = cfg.k_grid(sigma)?;
    let traces = par_map(io.jobs, &ks, |&k| {
        greens_at_pairs(&pot, &BranchedWavenumber::real(k)?, &pairs)
    })?;

    let mut header = String::from("ln_k");
    for &(r, rp) in &pairs {
        let (r, rp) = (fmt_f64(r), fmt_f64(rp));
        header.push_str(&format!(",re_g_{r}_{rp},im_g_{r}_{rp}"));
    }
    let rows = ks
        .iter()
        .zip(&traces)
        .map(|(&k, (vals, _))| {
            let mut row = Vec::with_capacity(1 + 2 * vals.len());
            row.push(k.ln());
            for v in vals {
                row.push(v.re);
                row.push(v.im);
            }
            row
        })
        .collect::<Vec<_>>();
    let dest = Dest::primary(io.out.as_deref(), cfg.output.dir.as_deref(), "greens.csv");
    emit(&dest, &csv(&header, rows))?;

    if let Some(dest) = Dest::secondary(
        p.fit_out.as_deref(),
        cfg.output.dir.as_deref(),
        "greens-fit.json",
    ) {
        let mut ys = vec![Vec::with_capacity(ks.len()); pairs.len()];
        for (vals, _) in &traces {
            for (yp, &v) in ys.iter_mut().zip(vals) {
                yp.push(v);
            }
        }
        let fit = fit_oscillation(sigma, &ks, &ys)?;
        let record = OscillationRecord {
            sigma,
            pairs: pairs.clone(),
            k_min: cfg.grid.k_min,
            k_max: cfg.grid.k_max,
            n_points: ks.len(),
            expected_mobius_modulus: (-sigma * PI).exp(),
            fitted_mobius_modulus: fit.b.norm(),
            fit,
        };
        emit(&dest, &json(&record)?)?;
        let tol = cfg.tolerances.max_fit_residual;
        if record.fit.residual > tol {
            return Err(CliError::Tolerance {
                got: record.fit.residual,
                tol,
            });
        }
    }

    if let Some(dest) = Dest::secondary(
        p.solution_out.as_deref(),
        cfg.output.dir.as_deref(),
        "greens-solution.csv",
    ) {
        let mut radii: Vec<f64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
        radii.dedup();
        let k = ks[0];
        let samples = regular_solution(&pot, Complex64::new(k * k, 0.0), &radii)?;
        let rows = samples
            .iter()
            .map(|s| vec![s.r, s.u.re, s.u.im, s.du.re, s.du.im])
            .collect::<Vec<_>>();
        emit(&dest, &csv("r,re_u,im_u,re_du,im_du", rows))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// wkb
// ---------------------------------------------------------------------------

pub struct WkbParams {
    pub gamma: f64,
    pub mu: f64,
    pub r0: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points: usize,
}

pub fn wkb(cfg: &ExperimentConfig, p: &WkbParams, io: &Io) -> Result<(), CliError> {
    if !(p.lambda_min > 0.0) || !(p.lambda_max > p.lambda_min) {
        return Err(CliError::Usage(format!(
            "need 0 < lambda_min < lambda_max, got {} and {}",
            p.lambda_min, p.lambda_max
        )));
    }
    if p.points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {}",
            p.points
        )));
    }
    let span = (p.lambda_max / p.lambda_min).ln();
    let lambdas: Vec<f64> = (0..p.points)
        .map(|i| {
            if i == p.points - 1 {
                p.lambda_max
            } else {
                p.lambda_min * (span * i as f64 / (p.points - 1) as f64).exp()
            }
        })
        .collect();
    let vals = par_map(io.jobs, &lambdas, |&lam| {
        wkb_phase_integral(p.gamma, p.mu, lam, p.r0)
    })?;
    let rows = lambdas
        .iter()
        .zip(&vals)
        .map(|(&lam, &v)| vec![lam.ln(), v])
        .collect::<Vec<_>>();
    let dest = Dest::primary(io.out.as_deref(), cfg.output.dir.as_deref(), "wkb.csv");
    emit(&dest, &csv("ln_lambda,integral", rows))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn verify_cmd(
    cfg: &ExperimentConfig,
    preset: Option<&str>,
    io: &Io,
) -> Result<(), CliError> {
    let spec = match preset {
        Some(sel) => config::resolve_potential(sel)?,
        None => cfg.potential_spec()?,
    };
    let results = verify::run_all_with(&spec);
    let mut text = String::new();
    for r in &results {
        text.push_str(&r.line());
        text.push('\n');
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    text.push_str(&format!(
        "{}/{} criteria passed\n",
        results.len() - failed,
        results.len()
    ));
    let dest = Dest::primary(io.out.as_deref(), cfg.output.dir.as_deref(), "verify.txt");
    emit(&dest, &text)?;
    if failed > 0 {
        return Err(CliError::VerifyFailed {
            failed,
            total: results.len(),
        });
    }
    Ok(())
}

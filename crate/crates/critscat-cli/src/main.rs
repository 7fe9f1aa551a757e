//! `critscat`: spectral and scattering diagnostics for radial Schrodinger
//! operators with a critical inverse-square tail.
//!
//! Configuration is layered: built-in defaults, then `--config FILE` (flat
//! sectioned key-value text, or JSON), then `CRITSCAT_*` environment
//! variables, then command-line flags.  Artifacts go to stdout unless `--out`
//! or the configured output directory says otherwise.  Identical
//! configurations produce byte-identical output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use critscat_cli::commands::{self, CliError, Io, SpecFunction};
use critscat_cli::config::{self, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "critscat",
    version,
    about = "Low-energy spectral and scattering diagnostics for critical inverse-square operators",
    after_help = "Environment: CRITSCAT_DIMENSION, CRITSCAT_ANGULAR_MOMENTUM, CRITSCAT_GAMMA, \
                  CRITSCAT_SIGMA, CRITSCAT_POTENTIAL, CRITSCAT_K_MIN, CRITSCAT_K_MAX, \
                  CRITSCAT_POINTS_PER_PERIOD, CRITSCAT_PROBES, CRITSCAT_OUT_DIR, \
                  CRITSCAT_MAX_FIT_RESIDUAL, CRITSCAT_JOBS (flags > environment > --config file \
                  > defaults)."
)]
struct Cli {
    /// configuration file: flat key-value text with [sections], or JSON
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// worker threads for independent sweeps (output order is fixed)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// write the primary artifact to this file instead of stdout (`-` = stdout)
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// Sector selection shared by most subcommands.
#[derive(Args)]
struct SectorArgs {
    /// ambient dimension (default 3)
    #[arg(long, value_name = "D")]
    d: Option<u32>,

    /// angular momentum (default 0)
    #[arg(long, value_name = "L")]
    l: Option<u32>,

    /// coupling of the critical inverse-square tail (default 1.25)
    #[arg(long, value_name = "G", allow_negative_numbers = true)]
    gamma: Option<f64>,

    /// oscillation rate; sets gamma = sigma^2 + kappa^2 for the chosen (d, l)
    #[arg(
        long,
        value_name = "S",
        conflicts_with = "gamma",
        allow_negative_numbers = true
    )]
    sigma: Option<f64>,
}

impl SectorArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(d) = self.d {
            cfg.sector.dimension = d;
        }
        if let Some(l) = self.l {
            cfg.sector.angular_momentum = l;
        }
        if let Some(g) = self.gamma {
            cfg.sector.gamma = Some(g);
            cfg.sector.sigma = None;
        }
        if let Some(s) = self.sigma {
            cfg.sector.sigma = Some(s);
            cfg.sector.gamma = None;
        }
    }
}

/// Wavenumber grid overrides shared by sweep subcommands.
#[derive(Args)]
struct GridArgs {
    /// smallest wavenumber of the sweep (default 1e-6)
    #[arg(long, value_name = "K")]
    k_min: Option<f64>,

    /// largest wavenumber of the sweep (default 1e-2)
    #[arg(long, value_name = "K")]
    k_max: Option<f64>,

    /// samples per log-period pi/sigma (default 48)
    #[arg(long, value_name = "N")]
    points_per_period: Option<usize>,
}

impl GridArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(k) = self.k_min {
            cfg.grid.k_min = k;
        }
        if let Some(k) = self.k_max {
            cfg.grid.k_max = k;
        }
        if let Some(n) = self.points_per_period {
            cfg.grid.points_per_period = n;
        }
    }
}

#[derive(Args)]
struct PotentialArg {
    /// bundled preset (pure, compact-bump, power-tail, singular-head) or a
    /// path to a JSON potential spec
    #[arg(long, value_name = "PRESET|FILE")]
    potential: Option<String>,
}

impl PotentialArg {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(sel) = &self.potential {
            cfg.potential.selection = sel.clone();
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a sector and the full angular decomposition (JSON)
    Sector {
        #[command(flatten)]
        sector: SectorArgs,
    },

    /// Evaluate a bundled special function on a grid (CSV: input,re,im)
    Specfun {
        #[command(flatten)]
        sector: SectorArgs,

        /// which function to evaluate
        #[arg(long, value_enum, default_value = "hankel1")]
        function: SpecFunction,

        /// comma-separated evaluation points (moduli for complex arguments)
        #[arg(
            long,
            value_name = "X,X,...",
            value_delimiter = ',',
            default_value = "0.5,1,2,5,10",
            allow_hyphen_values = true
        )]
        inputs: Vec<f64>,

        /// argument angle in radians for bessel-j / hankel1 inputs
        #[arg(
            long,
            value_name = "RAD",
            default_value_t = 0.0,
            allow_negative_numbers = true
        )]
        arg: f64,
    },

    /// Weighted remainder of the model-resolvent expansion over a k-sweep
    /// (CSV: abs_k,expansion_error; optional eigenvalue-ladder JSON)
    ModelResolvent {
        #[command(flatten)]
        sector: SectorArgs,

        #[command(flatten)]
        grid: GridArgs,

        /// polynomial weight of the pairing (must exceed 1)
        #[arg(long, value_name = "S", default_value_t = 2.0)]
        weight: f64,

        /// radial quadrature resolution in points per decade
        #[arg(long, value_name = "N", default_value_t = 32)]
        per_decade: usize,

        /// ladder depth for the companion eigenvalue record
        #[arg(long, value_name = "N", default_value_t = 8)]
        levels: usize,

        /// write the eigenvalue-ladder JSON here (`-` = stdout)
        #[arg(long, value_name = "FILE")]
        ladder_out: Option<PathBuf>,
    },

    /// Geometric ladder of negative model eigenvalues (JSON)
    Eigenvalues {
        #[command(flatten)]
        sector: SectorArgs,

        /// number of ladder levels
        #[arg(long = "n", short = 'n', value_name = "N", default_value_t = 6)]
        n: usize,
    },

    /// Short-range phase shift along a decreasing k-sweep (CSV: ln_k,sigma_sr)
    PhaseShift {
        #[command(flatten)]
        sector: SectorArgs,

        #[command(flatten)]
        potential: PotentialArg,

        #[command(flatten)]
        grid: GridArgs,
    },

    /// Fit the log-periodic threshold law to a phase-shift sweep (JSON)
    FitAsymptotics {
        #[command(flatten)]
        sector: SectorArgs,

        #[command(flatten)]
        potential: PotentialArg,

        #[command(flatten)]
        grid: GridArgs,
    },

    /// Green-function probe traces over a k-sweep (CSV; optional oscillation
    /// fit JSON and radial-solution CSV)
    Greens {
        #[command(flatten)]
        sector: SectorArgs,

        #[command(flatten)]
        potential: PotentialArg,

        #[command(flatten)]
        grid: GridArgs,

        /// probe pairs `r,rp; r,rp; ...` (default: the seven standard pairs)
        #[arg(long, value_name = "R,RP;...")]
        probes: Option<String>,

        /// write the oscillation-fit JSON here (`-` = stdout)
        #[arg(long, value_name = "FILE")]
        fit_out: Option<PathBuf>,

        /// write the regular solution at the smallest wavenumber, sampled at
        /// the probe radii, as CSV (`-` = stdout)
        #[arg(long, value_name = "FILE")]
        solution_out: Option<PathBuf>,
    },

    /// Semiclassical phase integral over an energy sweep (CSV: ln_lambda,integral)
    Wkb {
        /// coupling of the inverse-square term
        #[arg(long, value_name = "G", default_value_t = 1.25)]
        gamma: f64,

        /// tail-correction decay exponent (must exceed 1)
        #[arg(long, value_name = "MU", default_value_t = 2.0)]
        mu: f64,

        /// outer turning radius
        #[arg(long, value_name = "R", default_value_t = 1.0)]
        r0: f64,

        /// smallest energy of the sweep
        #[arg(long, value_name = "E", default_value_t = 1e-6)]
        lambda_min: f64,

        /// largest energy of the sweep
        #[arg(long, value_name = "E", default_value_t = 1e-2)]
        lambda_max: f64,

        /// number of log-spaced sweep points
        #[arg(long, value_name = "N", default_value_t = 25)]
        points: usize,
    },

    /// Run the complete verification battery and print a pass/fail table
    Verify {
        /// potential preset (or JSON spec path) for the Green-function criteria
        #[arg(long, value_name = "PRESET|FILE")]
        preset: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => ExperimentConfig::default(),
    };
    config::apply_env(&mut cfg, std::env::vars())?;
    let jobs = match cli.jobs {
        Some(j) => j,
        None => config::jobs_from_env(std::env::vars())?.unwrap_or(1),
    };
    let io = Io {
        out: cli.out.clone(),
        jobs: jobs.max(1),
    };

    match &cli.command {
        Command::Sector { sector } => {
            sector.apply(&mut cfg);
            commands::sector(&cfg, &io)
        }
        Command::Specfun {
            sector,
            function,
            inputs,
            arg,
        } => {
            sector.apply(&mut cfg);
            let params = commands::SpecfunParams {
                function: *function,
                inputs: inputs.clone(),
                arg: *arg,
            };
            commands::specfun(&cfg, &params, &io)
        }
        Command::ModelResolvent {
            sector,
            grid,
            weight,
            per_decade,
            levels,
            ladder_out,
        } => {
            sector.apply(&mut cfg);
            grid.apply(&mut cfg);
            let params = commands::ModelResolventParams {
                weight: *weight,
                per_decade: *per_decade,
                levels: *levels,
                ladder_out: ladder_out.clone(),
            };
            commands::model_resolvent(&cfg, &params, &io)
        }
        Command::Eigenvalues { sector, n } => {
            sector.apply(&mut cfg);
            commands::eigenvalues(&cfg, *n, &io)
        }
        Command::PhaseShift {
            sector,
            potential,
            grid,
        } => {
            sector.apply(&mut cfg);
            potential.apply(&mut cfg);
            grid.apply(&mut cfg);
            commands::phase_shift(&cfg, &io)
        }
        Command::FitAsymptotics {
            sector,
            potential,
            grid,
        } => {
            sector.apply(&mut cfg);
            potential.apply(&mut cfg);
            grid.apply(&mut cfg);
            commands::fit_asymptotics(&cfg, &io)
        }
        Command::Greens {
            sector,
            potential,
            grid,
            probes,
            fit_out,
            solution_out,
        } => {
            sector.apply(&mut cfg);
            potential.apply(&mut cfg);
            grid.apply(&mut cfg);
            if let Some(list) = probes {
                cfg.probes.pairs = config::parse_pairs(list)
                    .map_err(|m| CliError::Usage(format!("--probes: {m}")))?;
            }
            let params = commands::GreensParams {
                fit_out: fit_out.clone(),
                solution_out: solution_out.clone(),
            };
            commands::greens(&cfg, &params, &io)
        }
        Command::Wkb {
            gamma,
            mu,
            r0,
            lambda_min,
            lambda_max,
            points,
        } => {
            let params = commands::WkbParams {
                gamma: *gamma,
                mu: *mu,
                r0: *r0,
                lambda_min: *lambda_min,
                lambda_max: *lambda_max,
                points: *points,
            };
            commands::wkb(&cfg, &params, &io)
        }
        Command::Verify { preset } => commands::verify_cmd(&cfg, preset.as_deref(), &io),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

//! Experiment configuration: defaults, file parsing, and environment overrides.
//!
//! A configuration names a sector, a potential, a wavenumber grid, probe
//! pairs, an optional output directory, and tolerance overrides.  Values are
//! layered in increasing precedence: built-in defaults, then a config file
//! (`--config`), then `CRITSCAT_*` environment variables, then command-line
//! flags.
//!
//! Two file formats are accepted.  The native one is flat key-value text
//! grouped by `[section]` headers (parsed here with no external dependency);
//! a file whose first non-blank byte is `{` (or whose extension is `.json`)
//! is instead read as JSON with the same section/field names.  Rendering a
//! configuration with [`render_flat`] and parsing it back is lossless.
//!
//! Defaults: sector `dimension = 3`, `angular_momentum = 0` with coupling
//! `gamma = 1.25` (oscillation rate 1) unless `gamma` or `sigma` is given;
//! potential `selection = compact-bump`; grid `k_min = 1e-6`, `k_max = 1e-2`
//! with `points_per_period = 48`; the seven standard probe pairs; no output
//! directory (stdout); `max_fit_residual = 0.5`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use critscat::potentials::PotentialSpec;
use critscat::sectors::Sector;

/// Configuration errors carry enough position information (line number, key,
/// or variable name) to point at the offending input.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{msg}")]
    Json { msg: String },
    #[error("environment variable {var}: {msg}")]
    Env { var: String, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// `[sector]`: either an explicit coupling `gamma` or an oscillation rate
/// `sigma` (which sets `gamma = sigma^2 + kappa^2` for the chosen `(d, l)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SectorConfig {
    pub dimension: u32,
    pub angular_momentum: u32,
    pub gamma: Option<f64>,
    pub sigma: Option<f64>,
}

impl Default for SectorConfig {
    fn default() -> Self {
        SectorConfig {
            dimension: 3,
            angular_momentum: 0,
            gamma: None,
            sigma: None,
        }
    }
}

/// `[potential]`: a bundled preset name (`pure`, `compact-bump`,
/// `power-tail`, `singular-head`) or a path to a JSON potential spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialConfig {
    pub selection: String,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig {
            selection: "compact-bump".into(),
        }
    }
}

/// `[grid]`: log-spaced wavenumbers from `k_min` to `k_max` with
/// `points_per_period` samples per log-period `pi / sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub points_per_period: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            k_min: 1e-6,
            k_max: 1e-2,
            points_per_period: 48,
        }
    }
}

/// `[probes]`: `(r, r')` pairs at which Green-function traces are recorded,
/// written as `pairs = r,rp; r,rp; ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbesConfig {
    pub pairs: Vec<(f64, f64)>,
}

impl Default for ProbesConfig {
    fn default() -> Self {
        ProbesConfig {
            pairs: critscat::greens::probe_pairs(),
        }
    }
}

/// `[output]`: optional directory for artifacts; when unset the primary
/// artifact goes to stdout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
}

/// `[tolerances]`: bounds the CLI enforces on fitted quantities.  A fit whose
/// relative rms residual exceeds `max_fit_residual` makes the command exit
/// nonzero (after writing its output).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub max_fit_residual: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            max_fit_residual: 0.5,
        }
    }
}

/// The full experiment configuration; see the module docs for defaults and
/// layering rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sector: SectorConfig,
    pub potential: PotentialConfig,
    pub grid: GridConfig,
    pub probes: ProbesConfig,
    pub output: OutputConfig,
    pub tolerances: ToleranceConfig,
}

impl ExperimentConfig {
    /// Resolve the configured sector.  `gamma` and `sigma` are mutually
    /// exclusive; with neither set the default coupling is 1.25.
    pub fn sector(&self) -> Result<Sector, ConfigError> {
        let s = &self.sector;
        let gamma = match (s.gamma, s.sigma) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Semantic(
                    "sector.gamma and sector.sigma are mutually exclusive".into(),
                ))
            }
            (Some(g), None) => g,
            (None, Some(sig)) => {
                if !(sig > 0.0) || !sig.is_finite() {
                    return Err(ConfigError::Semantic(format!(
                        "sector.sigma must be positive and finite, got {sig}"
                    )));
                }
                let kappa =
                    s.angular_momentum as f64 + s.dimension as f64 / 2.0 - 1.0;
                sig * sig + kappa * kappa
            }
            (None, None) => 1.25,
        };
        Sector::new(s.dimension, s.angular_momentum, gamma)
            .map_err(|e| ConfigError::Semantic(e.to_string()))
    }

    /// Resolve the configured potential selection to a spec.
    pub fn potential_spec(&self) -> Result<PotentialSpec, ConfigError> {
        resolve_potential(&self.potential.selection)
    }

    /// The increasing log-spaced wavenumber grid implied by `[grid]` for a
    /// sector oscillating at rate `sigma`.
    pub fn k_grid(&self, sigma: f64) -> Result<Vec<f64>, ConfigError> {
        let g = &self.grid;
        if !(g.k_min > 0.0) || !g.k_min.is_finite() {
            return Err(ConfigError::Semantic(format!(
                "grid.k_min must be positive and finite, got {}",
                g.k_min
            )));
        }
        if !(g.k_max > g.k_min) || !g.k_max.is_finite() {
            return Err(ConfigError::Semantic(format!(
                "grid.k_max must exceed k_min = {}, got {}",
                g.k_min, g.k_max
            )));
        }
        if g.points_per_period < 2 {
            return Err(ConfigError::Semantic(format!(
                "grid.points_per_period must be at least 2, got {}",
                g.points_per_period
            )));
        }
        let span = (g.k_max / g.k_min).ln();
        let period = PI / sigma;
        let n = ((span / period) * g.points_per_period as f64).ceil() as usize + 1;
        let n = n.max(2);
        Ok((0..n)
            .map(|i| {
                if i == n - 1 {
                    g.k_max
                } else {
                    g.k_min * (span * i as f64 / (n - 1) as f64).exp()
                }
            })
            .collect())
    }
}

/// Bundled preset names in display order.
pub const PRESET_NAMES: [&str; 4] = ["pure", "compact-bump", "power-tail", "singular-head"];

/// Resolve a potential selection: a bundled preset name, or a path to a JSON
/// spec file (e.g. `{"preset": "compact-bump", "amplitude": 0.25}`).
pub fn resolve_potential(selection: &str) -> Result<PotentialSpec, ConfigError> {
    match selection {
        "pure" => Ok(PotentialSpec::Pure),
        "compact-bump" => Ok(PotentialSpec::compact_bump()),
        "power-tail" => Ok(PotentialSpec::power_tail()),
        "singular-head" => Ok(PotentialSpec::singular_head()),
        other => {
            let path = Path::new(other);
            if path.exists() {
                let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
                    path: other.into(),
                    source: e,
                })?;
                serde_json::from_str(&text).map_err(|e| ConfigError::Json {
                    msg: format!("potential spec {other}: {e}"),
                })
            } else {
                Err(ConfigError::Semantic(format!(
                    "unknown potential `{other}`: expected one of {}, or a path to a \
                     JSON spec file",
                    PRESET_NAMES.join(", ")
                )))
            }
        }
    }
}

/// Load a configuration file, accepting the flat sectioned format or JSON.
pub fn load(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        source: e,
    })?;
    let looks_json = path.extension().is_some_and(|e| e == "json")
        || text.trim_start().starts_with('{');
    if looks_json {
        serde_json::from_str(&text).map_err(|e| ConfigError::Json { msg: e.to_string() })
    } else {
        parse_flat(&text)
    }
}

const SECTIONS: [&str; 6] = [
    "sector",
    "potential",
    "grid",
    "probes",
    "output",
    "tolerances",
];

/// Parse the flat sectioned key-value format.  `#` starts a comment, blank
/// lines are ignored, and a repeated key's last value wins.
pub fn parse_flat(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        if let Some(inner) = content.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| ConfigError::Line {
                line,
                msg: format!("malformed section header `{content}`"),
            })?;
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::Line {
                    line,
                    msg: format!(
                        "unknown section `[{name}]`: expected one of [{}]",
                        SECTIONS.join("], [")
                    ),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Line {
            line,
            msg: format!("expected `key = value` or `[section]`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let section = section.as_deref().ok_or_else(|| ConfigError::Line {
            line,
            msg: format!("key `{key}` appears before any [section] header"),
        })?;
        assign(&mut cfg, section, key, value)
            .map_err(|msg| ConfigError::Line { line, msg })?;
    }
    Ok(cfg)
}

fn assign(
    cfg: &mut ExperimentConfig,
    section: &str,
    key: &str,
    value: &str,
) -> Result<(), String> {
    match (section, key) {
        ("sector", "dimension") => cfg.sector.dimension = parse_u32(key, value)?,
        ("sector", "angular_momentum") => {
            cfg.sector.angular_momentum = parse_u32(key, value)?
        }
        ("sector", "gamma") => cfg.sector.gamma = Some(parse_f64(key, value)?),
        ("sector", "sigma") => cfg.sector.sigma = Some(parse_f64(key, value)?),
        ("potential", "selection") => cfg.potential.selection = value.to_string(),
        ("grid", "k_min") => cfg.grid.k_min = parse_f64(key, value)?,
        ("grid", "k_max") => cfg.grid.k_max = parse_f64(key, value)?,
        ("grid", "points_per_period") => {
            cfg.grid.points_per_period = parse_usize(key, value)?
        }
        ("probes", "pairs") => cfg.probes.pairs = parse_pairs(value).map_err(|m| {
            format!("key `pairs`: {m}")
        })?,
        ("output", "dir") => {
            cfg.output.dir = if value.is_empty() {
                None
            } else {
                Some(value.to_string())
            }
        }
        ("tolerances", "max_fit_residual") => {
            cfg.tolerances.max_fit_residual = parse_f64(key, value)?
        }
        _ => {
            return Err(format!(
                "unknown key `{key}` in section [{section}]; expected {}",
                section_keys(section)
            ))
        }
    }
    Ok(())
}

fn section_keys(section: &str) -> &'static str {
    match section {
        "sector" => "dimension, angular_momentum, gamma, sigma",
        "potential" => "selection",
        "grid" => "k_min, k_max, points_per_period",
        "probes" => "pairs",
        "output" => "dir",
        "tolerances" => "max_fit_residual",
        _ => "",
    }
}

fn parse_u32(key: &str, value: &str) -> Result<u32, String> {
    value
        .parse()
        .map_err(|_| format!("key `{key}`: invalid unsigned integer `{value}`"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("key `{key}`: invalid unsigned integer `{value}`"))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, String> {
    let x: f64 = value
        .parse()
        .map_err(|_| format!("key `{key}`: invalid number `{value}`"))?;
    if !x.is_finite() {
        return Err(format!("key `{key}`: number must be finite, got `{value}`"));
    }
    Ok(x)
}

/// Parse a probe pair list `r,rp; r,rp; ...` (a trailing `;` is tolerated).
pub fn parse_pairs(value: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut pairs = Vec::new();
    for part in value.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (a, b) = part
            .split_once(',')
            .ok_or_else(|| format!("expected `r,rp` in pair list, got `{part}`"))?;
        let a = parse_f64("pairs", a.trim()).map_err(|_| {
            format!("invalid number `{}` in pair list", a.trim())
        })?;
        let b = parse_f64("pairs", b.trim()).map_err(|_| {
            format!("invalid number `{}` in pair list", b.trim())
        })?;
        pairs.push((a, b));
    }
    Ok(pairs)
}

/// Render the canonical flat form; `parse_flat` recovers the value exactly.
pub fn render_flat(cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[sector]");
    let _ = writeln!(s, "dimension = {}", cfg.sector.dimension);
    let _ = writeln!(s, "angular_momentum = {}", cfg.sector.angular_momentum);
    if let Some(g) = cfg.sector.gamma {
        let _ = writeln!(s, "gamma = {g}");
    }
    if let Some(sig) = cfg.sector.sigma {
        let _ = writeln!(s, "sigma = {sig}");
    }
    let _ = writeln!(s, "\n[potential]");
    let _ = writeln!(s, "selection = {}", cfg.potential.selection);
    let _ = writeln!(s, "\n[grid]");
    let _ = writeln!(s, "k_min = {}", cfg.grid.k_min);
    let _ = writeln!(s, "k_max = {}", cfg.grid.k_max);
    let _ = writeln!(s, "points_per_period = {}", cfg.grid.points_per_period);
    let _ = writeln!(s, "\n[probes]");
    let pairs: Vec<String> = cfg
        .probes
        .pairs
        .iter()
        .map(|(a, b)| format!("{a},{b}"))
        .collect();
    let _ = writeln!(s, "pairs = {}", pairs.join("; "));
    let _ = writeln!(s, "\n[output]");
    if let Some(dir) = &cfg.output.dir {
        let _ = writeln!(s, "dir = {dir}");
    }
    let _ = writeln!(s, "\n[tolerances]");
    let _ = writeln!(s, "max_fit_residual = {}", cfg.tolerances.max_fit_residual);
    s
}

/// Environment variables recognized by [`apply_env`], in application order.
pub const ENV_VARS: [&str; 11] = [
    "CRITSCAT_DIMENSION",
    "CRITSCAT_ANGULAR_MOMENTUM",
    "CRITSCAT_GAMMA",
    "CRITSCAT_SIGMA",
    "CRITSCAT_POTENTIAL",
    "CRITSCAT_K_MIN",
    "CRITSCAT_K_MAX",
    "CRITSCAT_POINTS_PER_PERIOD",
    "CRITSCAT_PROBES",
    "CRITSCAT_OUT_DIR",
    "CRITSCAT_MAX_FIT_RESIDUAL",
];

/// Overlay `CRITSCAT_*` variables onto `cfg`.  Empty values are treated as
/// unset.  `CRITSCAT_GAMMA` and `CRITSCAT_SIGMA` are mutually exclusive (each
/// also clears the other field so the environment can override a file).
pub fn apply_env<I>(cfg: &mut ExperimentConfig, vars: I) -> Result<(), ConfigError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut found: Vec<(String, String)> = vars
        .into_iter()
        .filter(|(k, v)| k.starts_with("CRITSCAT_") && !v.is_empty())
        .collect();
    found.sort(); // deterministic application order
    for (k, _) in &found {
        if k != "CRITSCAT_JOBS" && !ENV_VARS.contains(&k.as_str()) {
            return Err(ConfigError::Env {
                var: k.clone(),
                msg: format!("unrecognized; known variables: {}", ENV_VARS.join(", ")),
            });
        }
    }
    let get = |name: &str| -> Option<&str> {
        found
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    };
    if get("CRITSCAT_GAMMA").is_some() && get("CRITSCAT_SIGMA").is_some() {
        return Err(ConfigError::Env {
            var: "CRITSCAT_GAMMA".into(),
            msg: "mutually exclusive with CRITSCAT_SIGMA".into(),
        });
    }
    let env_f64 = |var: &str, v: &str| -> Result<f64, ConfigError> {
        parse_f64(var, v).map_err(|msg| ConfigError::Env {
            var: var.into(),
            msg,
        })
    };
    if let Some(v) = get("CRITSCAT_DIMENSION") {
        cfg.sector.dimension = parse_u32("CRITSCAT_DIMENSION", v)
            .map_err(|msg| ConfigError::Env {
                var: "CRITSCAT_DIMENSION".into(),
                msg,
            })?;
    }
    if let Some(v) = get("CRITSCAT_ANGULAR_MOMENTUM") {
        cfg.sector.angular_momentum = parse_u32("CRITSCAT_ANGULAR_MOMENTUM", v)
            .map_err(|msg| ConfigError::Env {
                var: "CRITSCAT_ANGULAR_MOMENTUM".into(),
                msg,
            })?;
    }
    if let Some(v) = get("CRITSCAT_GAMMA") {
        cfg.sector.gamma = Some(env_f64("CRITSCAT_GAMMA", v)?);
        cfg.sector.sigma = None;
    }
    if let Some(v) = get("CRITSCAT_SIGMA") {
        cfg.sector.sigma = Some(env_f64("CRITSCAT_SIGMA", v)?);
        cfg.sector.gamma = None;
    }
    if let Some(v) = get("CRITSCAT_POTENTIAL") {
        cfg.potential.selection = v.to_string();
    }
    if let Some(v) = get("CRITSCAT_K_MIN") {
        cfg.grid.k_min = env_f64("CRITSCAT_K_MIN", v)?;
    }
    if let Some(v) = get("CRITSCAT_K_MAX") {
        cfg.grid.k_max = env_f64("CRITSCAT_K_MAX", v)?;
    }
    if let Some(v) = get("CRITSCAT_POINTS_PER_PERIOD") {
        cfg.grid.points_per_period = parse_usize("CRITSCAT_POINTS_PER_PERIOD", v)
            .map_err(|msg| ConfigError::Env {
                var: "CRITSCAT_POINTS_PER_PERIOD".into(),
                msg,
            })?;
    }
    if let Some(v) = get("CRITSCAT_PROBES") {
        cfg.probes.pairs = parse_pairs(v).map_err(|msg| ConfigError::Env {
            var: "CRITSCAT_PROBES".into(),
            msg,
        })?;
    }
    if let Some(v) = get("CRITSCAT_OUT_DIR") {
        cfg.output.dir = Some(v.to_string());
    }
    if let Some(v) = get("CRITSCAT_MAX_FIT_RESIDUAL") {
        cfg.tolerances.max_fit_residual = env_f64("CRITSCAT_MAX_FIT_RESIDUAL", v)?;
    }
    Ok(())
}

/// Worker-thread count from `CRITSCAT_JOBS`, if set and non-empty.
pub fn jobs_from_env<I>(vars: I) -> Result<Option<usize>, ConfigError>
where
    I: IntoIterator<Item = (String, String)>,
{
    for (k, v) in vars {
        if k == "CRITSCAT_JOBS" && !v.is_empty() {
            let jobs = parse_usize("CRITSCAT_JOBS", &v).map_err(|msg| ConfigError::Env {
                var: "CRITSCAT_JOBS".into(),
                msg,
            })?;
            return Ok(Some(jobs));
        }
    }
    Ok(None)
}

use thiserror::Error;

/// Crate-wide error type.  Variants mirror the failure modes of the numerical
/// pipeline rather than the call sites: domain violations, precision loss in a
/// special-function route, and integrator breakdowns.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gamma function pole at non-positive integer z = {re}+{im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("{what}: estimated relative error {estimate:.2e} exceeds {limit:.2e}")]
    PrecisionLoss {
        what: &'static str,
        estimate: f64,
        limit: f64,
    },

    #[error("special-function routes disagree near switch radius: {0}")]
    RouteMismatch(String),

    #[error("K_(i sigma)(x) underflows to zero for x = {x}")]
    UnderflowToZero { x: f64 },

    #[error("gamma = {gamma} is within the borderline band of the threshold (l+d/2-1)^2 = {threshold}")]
    BorderlineGamma { gamma: f64, threshold: f64 },

    #[error("sector is not oscillatory: nu^2 = {nu_squared} >= 0")]
    NotOscillatory { nu_squared: f64 },

    #[error("integer overflow in multiplicity formula for d = {d}, m = {m}")]
    MultiplicityOverflow { d: u32, m: u32 },

    #[error("step size underflow at x = {x} (h = {h:.3e})")]
    StepUnderflow { x: f64, h: f64 },

    #[error("solution blew up at x = {x} (|u| = {magnitude:.3e})")]
    Blowup { x: f64, magnitude: f64 },

    #[error("basis not valid at r = {r}: {why}")]
    BasisDomain { r: f64, why: String },

    #[error("denominator vanishes: {0}")]
    DenominatorZero(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("undersampled curve: {0}")]
    Undersampled(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate bounds: {0}")]
    DegenerateBounds(String),
    #[error("seed region extends outside grid bounds")]
    SeedOutsideBounds,
    #[error("grids have mismatched bounds or resolution")]
    GeometryMismatch,
    #[error("operation undefined on an empty set: {0}")]
    EmptySet(&'static str),
    #[error("dilation by {eps} escapes grid bounds in strict mode")]
    DilationEscapes { eps: f64 },
    #[error("image of map {map_index} escapes grid bounds")]
    ImageEscapesBounds { map_index: usize },
    #[error("image escapes the working region X")]
    ImageEscapesDomain,
    #[error("orbit point left grid bounds at step {step}")]
    OrbitEscapesBounds { step: usize },
    #[error("map is not invertible (det = {det})")]
    NonInvertible { det: f64 },
    #[error("system is not contractive (factor {factor})")]
    NonContractive { factor: f64 },
    #[error("no convergence after {iterations} iterations (last step {last_step})")]
    NonConvergence { iterations: usize, last_step: f64 },
    #[error("iterate became empty")]
    EmptyIterate,
    #[error("input is not a continuum: {components} connected components")]
    Disconnected { components: usize },
    #[error("need at least {needed} resolutions, got {got}")]
    TooFewResolutions { needed: usize, got: usize },
    #[error("component-count evidence is inconclusive: {0:?}")]
    InconclusiveEvidence(Vec<(f64, usize)>),
    #[error("invalid box scales: {0}")]
    InvalidScales(String),
    #[error("degenerate box-count fit: all counts equal")]
    DegenerateFit,
    #[error("origin is not repelling at lambda = {lambda}")]
    OriginNotRepelling { lambda: f64 },
    #[error("set iteration did not stabilize within {0} iterations")]
    NoStabilization(usize),
    #[error("attractor block does not verify: {0}")]
    BlockNotVerified(String),
    #[error("nested iteration violated nestedness at step {step}")]
    NestednessViolated { step: usize },
    #[error("map not invertible on requested domain: {0}")]
    InverseDomain(String),
    #[error("region is not a trapping region: {0}")]
    NotTrapping(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("config error at line {line}, column {column}: {message}")]
    Config {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("PGM error: {0}")]
    Pgm(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Parameter-validation helper so messages consistently name the key.
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

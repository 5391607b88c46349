use thiserror::Error;

/// Errors raised across the solver, certifier and runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("outside supported scope: {0}")]
    Scope(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("modulus of continuity is not concave: {0}")]
    NotConcave(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("CFL violated: dt {dt:e} exceeds limit {limit:e}")]
    Cfl { dt: f64, limit: f64 },

    #[error("blow-up at step {step} (t = {t}): {reason}; running gradient integral {blowup_integral:e}")]
    BlowUp {
        step: u64,
        t: f64,
        reason: String,
        blowup_integral: f64,
    },

    #[error("regularity ladder stalls: increment {increment:e} <= 0; need p > {min_p}")]
    LadderStall { increment: f64, min_p: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for domain or validation errors, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Quadrature { .. } | Error::BlowUp { .. } | Error::Cfl { .. } => 2,
            _ => 1,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Scope(_) => "scope",
            Error::GridMismatch => "grid_mismatch",
            Error::NotConcave(_) => "not_concave",
            Error::Divergent(_) => "divergent",
            Error::Quadrature { .. } => "quadrature",
            Error::Cfl { .. } => "cfl",
            Error::BlowUp { .. } => "blow_up",
            Error::LadderStall { .. } => "ladder_stall",
            Error::Config(_) => "config",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

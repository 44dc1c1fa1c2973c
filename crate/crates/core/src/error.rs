use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tangent vectors live at different base points")]
    BaseMismatch,

    #[error("frame index out of range: ({0}, {1}); expected 1..=3")]
    FrameIndex(usize, usize),

    #[error("invalid ODE settings: {0}")]
    InvalidSettings(String),

    #[error("invalid initial condition: {0}")]
    InvalidInitialCondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration failed at s = {last_good_s}: {reason}")]
    IntegrationFailure { last_good_s: f64, reason: String },

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{end} end of the trajectory has not settled onto an axis-parallel line (max deviation {deviation:.3e})")]
    NotSettled { end: &'static str, deviation: f64 },

    #[error("lines are parallel to different axes")]
    AxisMismatch,

    #[error("no sign change of x(s1) on bracket: residual(lo = {lo}) = {residual_lo:?}, residual(hi = {hi}) = {residual_hi:?}")]
    Bracket {
        lo: f64,
        hi: f64,
        residual_lo: Option<f64>,
        residual_hi: Option<f64>,
    },

    #[error("curve does not close: |y(s1) - y0| = {residual_y:.3e} at y0 = {y0_star}")]
    NonClosing {
        y0_star: f64,
        s1: f64,
        residual_x: f64,
        residual_y: f64,
        iterations: usize,
    },

    #[error("degenerate mesh grid: {0}")]
    DegenerateGrid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

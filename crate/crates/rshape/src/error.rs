use thiserror::Error;

/// Errors surfaced by the geometry and estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("too few points: need at least {need}, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("all points are collinear; planar triangulation is undefined")]
    AllCollinear,
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("invalid radius {0}: must be positive")]
    InvalidRadius(f64),
    #[error("significance level {0} outside (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("degenerate sample size: n - v_n = {effective} (need >= 3) or non-positive area")]
    DegenerateSampleSize { effective: i64 },
    #[error("hull has empty boundary")]
    EmptyBoundary,
    #[error("hull region is degenerate (zero area)")]
    DegenerateRegion,
    #[error("membership grids do not match: {0}")]
    GridMismatch(String),
    #[error("unknown support model '{0}' (expected ring, cshape or sshape)")]
    UnknownModel(String),
    #[error("rejection sampler stalled: acceptance rate {rate:.2e} after {proposals} proposals")]
    RejectionStall { rate: f64, proposals: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite coordinate in input: {0}")]
    NonFinite(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code class: 2 usage, 3 data, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::AlphaOutOfRange(_) | Error::UnknownModel(_) => 2,
            Error::Io(_) | Error::Parse { .. } | Error::NonFinite(_) | Error::EmptyCloud
            | Error::TooFewPoints { .. } => 3,
            _ => 4,
        }
    }
}

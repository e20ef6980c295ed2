use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported matrix dimension {0}; only 2 and 4 are supported")]
    UnsupportedDimension(usize),

    #[error("matrix entry is not finite")]
    NonFinite,

    #[error("matrix is not Hermitian (max |M - M^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("eigenvalue {value:e} is below the PSD roundoff gate")]
    NegativeEigenvalue { value: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("state is not pure within tolerance {tolerance:e} (largest eigenvalue {largest})")]
    NotPure { largest: f64, tolerance: f64 },

    #[error("{name} = {value} is outside the valid interval {interval}")]
    Domain {
        name: &'static str,
        value: f64,
        interval: &'static str,
    },

    #[error("q = {q} is inconsistent with exp(-2*pi*omega/accel) = {implied}")]
    InconsistentAcceleration { q: f64, implied: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown figure preset '{0}' (expected fig1, fig2 or fig3)")]
    UnknownPreset(String),

    #[error("oracle deviation {deviation:e} exceeds {tolerance:e}")]
    OracleDeviation { deviation: f64, tolerance: f64 },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

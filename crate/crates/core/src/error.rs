use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the core toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chirp configuration: {0}")]
    InvalidChirp(String),

    #[error("invalid aperture: {0}")]
    InvalidAperture(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("scatterer coincides with an aperture element (zero range)")]
    ZeroRange,

    #[error("aperture geometry {found} is incompatible with {algorithm}")]
    GeometryMismatch {
        algorithm: &'static str,
        found: &'static str,
    },

    #[error("invalid reconstruction grid: {0}")]
    InvalidGrid(String),

    #[error("spectral axis is undersampled: {0}")]
    Undersampled(String),

    #[error("empty interpolation support: {0}")]
    EmptySupport(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("invalid drive configuration: {0}")]
    InvalidDrive(String),

    #[error("invalid motion profile: {0}")]
    InvalidMotion(String),

    #[error("invalid trigger plan: {0}")]
    InvalidPlan(String),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative wavenumber {0}")]
    NegativeWavenumber(f64),

    #[error("speed |v| = {0} is not admissible (must be below 1 - 1e-9)")]
    SpeedOutOfRange(f64),

    #[error("grid side {length} is too small for support radius {radius} (need L > 4 R)")]
    GridTooSmall { length: f64, radius: f64 },

    #[error("array shape {found:?} does not match grid with {expected} points per axis")]
    ShapeMismatch { expected: usize, found: Vec<usize> },

    #[error("particle support at q = {q:?} overlaps the box boundary (half side {half_side})")]
    ParticleOutsideBox { q: [f64; 3], half_side: f64 },

    #[error("ball of radius {radius} around {center:?} leaves the box")]
    BallOutsideBox { center: [f64; 3], radius: f64 },

    #[error("force has imaginary residue {residue:e}; field is not Hermitian")]
    NonHermitian { residue: f64 },

    #[error("non-finite state at t = {t}: {what}")]
    NonFinite { t: f64, what: String },

    #[error(
        "horizon t_end = {t_end} exceeds the wrap-around budget {budget} \
         (set allow_wraparound to override)"
    )]
    HorizonExceeded { t_end: f64, budget: f64 },

    #[error("the set of critical points is empty")]
    EmptyCriticalSet,

    #[error("snapshot format: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

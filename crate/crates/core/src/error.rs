use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field has a pole at w = {0}")]
    Pole(Complex64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not reach tolerance (value {value}, error estimate {estimate:e})")]
    Quadrature { value: Complex64, estimate: f64 },

    #[error("contour passes within {distance:e} of a zero")]
    ContourThroughZero { distance: f64 },

    #[error("winding count indeterminate: {0}")]
    Indeterminate(String),

    #[error("iteration diverged: {0}")]
    Divergence(String),

    #[error("point {0} is exceptional for the measure")]
    Exceptional(String),

    #[error("spacing condition violated: |{a} - {b}| = {distance:e} <= {threshold:e}")]
    Spacing {
        a: Complex64,
        b: Complex64,
        distance: f64,
        threshold: f64,
    },

    #[error("rejection sampling stalled after accepting {accepted} of {requested} points")]
    Stall { accepted: usize, requested: usize },

    #[error("density {value} at w = {at} exceeds the declared bound {bound}")]
    DensityBound { at: Complex64, value: f64, bound: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

//! Zeros and critical points of conditioned random polynomials on the
//! Riemann sphere.
//!
//! A polynomial of degree `N` is viewed as a meromorphic function on `S²`
//! with a pole of order `N` at the distinguished point `∞`. Everything here
//! works in the holomorphic chart `w` centered at `∞`, where
//!
//! ```text
//! p(w) = w^{-N} ∏ (w - z_k)
//! E_N(w) = ∂_w log|p|² = -N/w + Σ 1/(w - z_k)
//! ```
//!
//! and the critical points of `p` are the finite zeros of `E_N`. Some of
//! the zeros are pinned, the rest are drawn i.i.d. from a [`ZeroMeasure`].
//! A pinned zero `ξ` is expected to acquire a critical point at distance
//! of order `1/N`, at the root of the averaged field near `ξ`; the
//! [`pairing`] module makes that prediction and runs trials against it.

pub mod error;
pub mod experiment;
pub mod field;
pub mod measures;
pub mod pairing;
pub mod quadrature;
pub mod solver;
pub mod sphere;
pub mod summation;

pub use error::{Error, Result};
pub use field::ConditionedSample;
pub use measures::{CauchyFieldValue, ExceptionalStatus, MeasureKind, RadialProfile, ZeroMeasure};
pub use num_complex::Complex64;
pub use pairing::{PairingPrediction, TrialOutcome};
pub use solver::CriticalSet;
pub use sphere::{ChartPoint, Contour};

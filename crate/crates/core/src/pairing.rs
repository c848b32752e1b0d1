//! Paired critical points: where the averaged field predicts them, and
//! Monte Carlo trials of the event "exactly one critical point inside the
//! geodesic circle of radius `r/N` around the prediction".

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{expected_field, pinned_field_derivative, ConditionedSample};
use crate::measures::{ExceptionalStatus, ZeroMeasure};
use crate::solver::{critical_count_inside, local_refine};
use crate::sphere::{geodesic_circle, geodesic_distance, ChartPoint, Contour};

pub const CONTOUR_SAMPLES: usize = 128;
pub const DEFAULT_MARGIN: f64 = 0.05;
const REFINE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingPrediction {
    pub xi: ChartPoint,
    #[serde(rename = "N")]
    pub degree: usize,
    pub r: f64,
    /// `ξ·(1 − (1/N)/(φ_μ(ξ)·ξ − 1))`.
    pub w_first_order: Complex64,
    /// Root of the averaged field near `ξ`.
    pub w_exact: Complex64,
    /// `arg(ξ) − arg(1 − φ_μ(ξ)·ξ)`, the direction of `w − ξ`.
    pub predicted_arg: f64,
    /// `arg(ξ) − arg(1/ξ − φ_μ(ξ))`, the relation as usually quoted. It
    /// differs from `predicted_arg` by `arg(ξ)`; kept for comparison.
    pub quoted_arg: f64,
    pub contour: Contour,
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Prediction for a single pinned zero with the default exceptional
/// margin.
pub fn predict(mu: &ZeroMeasure, xi: ChartPoint, degree: usize, r: f64) -> Result<PairingPrediction> {
    predict_with_margin(mu, xi, degree, r, DEFAULT_MARGIN)
}

pub fn predict_with_margin(mu: &ZeroMeasure, xi: ChartPoint, degree: usize, r: f64, margin: f64) -> Result<PairingPrediction> {
    let x = xi
        .finite()
        .ok_or_else(|| Error::Exceptional("ξ = 0̲ is exceptional".into()))?;
    predict_in_context(mu, xi, &[x], degree, r, margin)
}

/// Prediction for `ξ` when all of `pinned` (which contains `ξ`) are
/// pinned. The first-order value ignores the other pinned zeros; the exact
/// root does not.
pub fn predict_in_context(
    mu: &ZeroMeasure,
    xi: ChartPoint,
    pinned: &[Complex64],
    degree: usize,
    r: f64,
    margin: f64,
) -> Result<PairingPrediction> {
    if degree < 4 {
        return Err(Error::InvalidInput(format!("predictions need N ≥ 4, got {degree}")));
    }
    if !(r > 0.0 && r.is_finite()) || r == 1.0 {
        return Err(Error::InvalidInput(format!("contour factor r must be positive and ≠ 1, got {r}")));
    }
    if let ExceptionalStatus::Exceptional = mu.exceptional_set_test(xi, margin)? {
        return Err(Error::Exceptional(format!("ξ = {xi:?} is within {margin} of the exceptional set")));
    }
    let x = xi.finite().expect("exceptional test rejects 0̲");
    if !pinned.contains(&x) {
        return Err(Error::InvalidInput("ξ must be one of the pinned zeros".into()));
    }

    let n = degree as f64;
    let phi = mu.cauchy_field(xi)?.value;
    let one = Complex64::new(1.0, 0.0);
    let w_first_order = x * (one - (1.0 / n) / (phi * x - one));
    let w_exact = solve_averaged(mu, pinned, degree, x, w_first_order)?;
    let contour = geodesic_circle(ChartPoint::Finite(w_exact), r / n, CONTOUR_SAMPLES)?;
    if contour.distance_to(x) <= 1e-9 * x.norm().max(1.0) {
        return Err(Error::InvalidInput(format!("ξ lies on the contour for r = {r}")));
    }
    Ok(PairingPrediction {
        xi,
        degree,
        r,
        w_first_order,
        w_exact,
        predicted_arg: wrap_angle(x.arg() - (one - phi * x).arg()),
        quoted_arg: wrap_angle(x.arg() - (x.inv() - phi).arg()),
        contour,
    })
}

/// Newton's method in `R²` on the averaged field. The pinned part is
/// holomorphic and differentiated exactly; `φ_μ` generally is not, so its
/// Jacobian comes from central differences.
fn solve_averaged(mu: &ZeroMeasure, pinned: &[Complex64], degree: usize, xi: Complex64, start: Complex64) -> Result<Complex64> {
    const MAX_ITERS: usize = 60;
    let random = (degree - pinned.len()) as f64;
    let leash = 10.0 * (start - xi).norm();
    let phi = |w: Complex64| -> Result<Complex64> { Ok(mu.cauchy_field(ChartPoint::Finite(w))?.value) };
    let mut w = start;
    for _ in 0..MAX_ITERS {
        let f = expected_field(mu, pinned, degree, w)?;
        let h = 1e-6 * w.norm().max(1e-3);
        let ih = Complex64::new(0.0, h);
        let holo = pinned_field_derivative(pinned, degree, w);
        let jx = holo + (phi(w + h)? - phi(w - h)?) * (random / (2.0 * h));
        let jy = Complex64::i() * holo + (phi(w + ih)? - phi(w - ih)?) * (random / (2.0 * h));
        let det = jx.re * jy.im - jy.re * jx.im;
        let step = Complex64::new((-f.re * jy.im + jy.re * f.im) / det, (-jx.re * f.im + jx.im * f.re) / det);
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(Error::Divergence(format!("singular Jacobian of the averaged field at {w}")));
        }
        w += step;
        if (w - start).norm() > leash {
            return Err(Error::Divergence(format!("averaged-field Newton left the neighbourhood of {start}")));
        }
        if step.norm() <= 1e-14 * w.norm() {
            return Ok(w);
        }
    }
    Err(Error::Divergence(format!("averaged-field Newton did not settle near {start}")))
}

/// The random stream of one trial: a pure function of the sweep seed, the
/// degree and the trial index.
pub fn trial_rng(seed: u64, degree: usize, trial_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(degree as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial_index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    #[serde(rename = "N")]
    pub degree: usize,
    pub xi: Complex64,
    /// Exactly one critical point inside the contour.
    pub paired: bool,
    /// `None` when the winding count could not be certified.
    pub count_inside: Option<i64>,
    pub indeterminate: bool,
    pub paired_point: Option<Complex64>,
    /// Geodesic distance from `ξ` to the paired point.
    pub distance_to_xi: Option<f64>,
    /// `arg(w* − ξ) − predicted_arg`, wrapped.
    pub arg_error: Option<f64>,
    /// Chart distance `|w* − w_exact|`.
    pub offset: Option<f64>,
    pub seed: u64,
    pub trial_index: u64,
}

fn assess(sample: &ConditionedSample, prediction: &PairingPrediction, seed: u64, trial_index: u64) -> Result<TrialOutcome> {
    let xi = prediction.xi.finite().expect("predictions have finite ξ");
    let mut outcome = TrialOutcome {
        degree: prediction.degree,
        xi,
        paired: false,
        count_inside: None,
        indeterminate: false,
        paired_point: None,
        distance_to_xi: None,
        arg_error: None,
        offset: None,
        seed,
        trial_index,
    };
    match critical_count_inside(sample, &prediction.contour) {
        Ok(count) => outcome.count_inside = Some(count),
        Err(Error::Indeterminate(_)) => {
            outcome.indeterminate = true;
            return Ok(outcome);
        }
        Err(e) => return Err(e),
    }
    if outcome.count_inside != Some(1) {
        return Ok(outcome);
    }
    outcome.paired = true;
    // Newton from the prediction, then from the other side of the disk if
    // the first run escapes; either must land inside to count.
    let starts = [prediction.w_exact, 0.5 * (prediction.w_exact + xi)];
    let found = starts
        .iter()
        .filter_map(|s| local_refine(sample, *s, REFINE_TOL).ok())
        .find(|w| prediction.contour.encloses(*w));
    if let Some(w) = found {
        outcome.paired_point = Some(w);
        outcome.distance_to_xi = Some(geodesic_distance(xi.into(), w.into()));
        outcome.arg_error = Some(wrap_angle((w - xi).arg() - prediction.predicted_arg));
        outcome.offset = Some((w - prediction.w_exact).norm());
    }
    Ok(outcome)
}

/// One conditioned sample with `ξ` pinned and `N − 1` random zeros.
pub fn run_single_trial(mu: &ZeroMeasure, prediction: &PairingPrediction, seed: u64, trial_index: u64) -> Result<TrialOutcome> {
    let xi = prediction.xi.finite().expect("predictions have finite ξ");
    let mut rng = trial_rng(seed, prediction.degree, trial_index);
    let sample = ConditionedSample::draw(mu, vec![xi], prediction.degree, &mut rng)?;
    assess(&sample, prediction, seed, trial_index)
}

/// `N^{−1/2+ε/2}`, the minimal pairwise chart distance among pinned zeros.
pub fn spacing_threshold(degree: usize, epsilon: f64) -> f64 {
    (degree as f64).powf(-0.5 + 0.5 * epsilon)
}

fn check_spacing(pinned: &[Complex64], degree: usize, epsilon: f64) -> Result<()> {
    let threshold = spacing_threshold(degree, epsilon);
    for (i, a) in pinned.iter().enumerate() {
        for b in &pinned[i + 1..] {
            let distance = (a - b).norm();
            if distance <= threshold {
                return Err(Error::Spacing {
                    a: *a,
                    b: *b,
                    distance,
                    threshold,
                });
            }
        }
    }
    Ok(())
}

/// Several pinned zeros at once, each with its own contour. Built once
/// and reused across trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiContext {
    pub pinned: Vec<Complex64>,
    #[serde(rename = "N")]
    pub degree: usize,
    pub epsilon: f64,
    pub predictions: Vec<PairingPrediction>,
}

impl MultiContext {
    pub fn new(mu: &ZeroMeasure, xis: &[ChartPoint], degree: usize, r: f64, epsilon: f64, margin: f64) -> Result<Self> {
        if xis.is_empty() || xis.len() >= degree {
            return Err(Error::InvalidInput(format!(
                "need between 1 and N − 1 pinned zeros, got {}",
                xis.len()
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidInput(format!("ε must lie in (0, 1), got {epsilon}")));
        }
        let pinned = xis
            .iter()
            .map(|x| x.finite().ok_or_else(|| Error::Exceptional("ξ = 0̲ is exceptional".into())))
            .collect::<Result<Vec<_>>>()?;
        check_spacing(&pinned, degree, epsilon)?;
        let predictions = xis
            .iter()
            .map(|x| predict_in_context(mu, *x, &pinned, degree, r, margin))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiContext {
            pinned,
            degree,
            epsilon,
            predictions,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiOutcome {
    pub all_paired: bool,
    pub any_indeterminate: bool,
    pub per_xi: Vec<TrialOutcome>,
}

/// One conditioned sample with every pinned zero of the context and
/// `N − |Ξ|` random zeros.
pub fn run_multi_trial(mu: &ZeroMeasure, context: &MultiContext, seed: u64, trial_index: u64) -> Result<MultiOutcome> {
    let mut rng = trial_rng(seed, context.degree, trial_index);
    let sample = ConditionedSample::draw(mu, context.pinned.clone(), context.degree, &mut rng)?;
    let per_xi = context
        .predictions
        .iter()
        .map(|p| assess(&sample, p, seed, trial_index))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiOutcome {
        all_paired: per_xi.iter().all(|o| o.paired),
        any_indeterminate: per_xi.iter().any(|o| o.indeterminate),
        per_xi,
    })
}

/// Rejection-samples `count` points from `μ` that are pairwise farther
/// apart than the spacing threshold and clear of the exceptional set.
pub fn generate_well_spaced<R: rand::Rng + ?Sized>(
    mu: &ZeroMeasure,
    count: usize,
    degree: usize,
    epsilon: f64,
    margin: f64,
    rng: &mut R,
) -> Result<Vec<ChartPoint>> {
    let threshold = spacing_threshold(degree, epsilon);
    let patience = 1000 * count.max(1);
    let mut accepted: Vec<Complex64> = Vec::with_capacity(count);
    let mut rejections = 0;
    while accepted.len() < count {
        let candidate = mu.sample(rng);
        let spaced = accepted.iter().all(|a| (a - candidate).norm() > threshold);
        let clear = spaced
            && matches!(
                mu.exceptional_set_test(ChartPoint::Finite(candidate), margin)?,
                ExceptionalStatus::Clear
            );
        if clear {
            accepted.push(candidate);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= patience {
                return Err(Error::Stall {
                    accepted: accepted.len(),
                    requested: count,
                });
            }
        }
    }
    Ok(accepted.into_iter().map(ChartPoint::Finite).collect())
}

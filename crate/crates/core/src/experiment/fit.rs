//! Power-law fits `rate ≈ A·N^slope` of failure rates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One observed rate. `se` weights the fit; `trials` drives the bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub rate: f64,
    pub se: f64,
    pub trials: usize,
}

impl RateRow {
    /// Binomial row: `failures` out of `trials`.
    pub fn binomial(n: usize, failures: usize, trials: usize) -> Self {
        let rate = if trials == 0 { 0.0 } else { failures as f64 / trials as f64 };
        RateRow {
            n,
            rate,
            se: (rate * (1.0 - rate) / trials as f64).sqrt(),
            trials,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Percentile bootstrap interval for the slope (95%).
    pub ci: (f64, f64),
    /// Rows with a zero rate, left out of the fit.
    pub excluded: Vec<usize>,
    pub resamples_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitResult {
    Fitted(Fit),
    /// Too few nonzero rates to fit a slope.
    BelowResolution { nonzero_rows: usize },
}

impl FitResult {
    pub fn slope(&self) -> Option<f64> {
        match self {
            FitResult::Fitted(f) => Some(f.slope),
            FitResult::BelowResolution { .. } => None,
        }
    }
}

/// Weighted least squares of `log rate` on `log N`. The weight of a row is
/// `1/Var(log rate) ≈ rate²/se²`; rows without an error estimate get
/// weight one (then all of them do).
fn weighted_line(points: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for &(x, y, w) in points {
        sw += w;
        sx += w * x;
        sy += w * y;
    }
    let (mx, my) = (sx / sw, sy / sw);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y, w) in points {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
    }
    (sxx > 0.0).then(|| {
        let slope = sxy / sxx;
        (slope, my - slope * mx)
    })
}

fn log_points(rows: &[RateRow]) -> Vec<(f64, f64, f64)> {
    let weighted = rows.iter().all(|r| r.se > 0.0);
    rows.iter()
        .map(|r| {
            let w = if weighted { (r.rate / r.se).powi(2) } else { 1.0 };
            ((r.n as f64).ln(), r.rate.ln(), w)
        })
        .collect()
}

/// Fits `log rate = intercept + slope·log N` over the rows with a nonzero
/// rate, with a bootstrap interval from binomial resampling of each row.
pub fn fit_exponent(rows: &[RateRow], resamples: usize, seed: u64) -> Result<FitResult> {
    if rows.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 rows to fit, got {}", rows.len())));
    }
    if let Some(r) = rows.iter().find(|r| !(0.0..=1.0).contains(&r.rate)) {
        return Err(Error::InvalidInput(format!("invalid rate {} at N = {}", r.rate, r.n)));
    }
    let (kept, zero): (Vec<RateRow>, Vec<RateRow>) = rows.iter().partition(|r| r.rate > 0.0);
    if kept.len() < 2 {
        return Ok(FitResult::BelowResolution { nonzero_rows: kept.len() });
    }
    let (slope, intercept) = weighted_line(&log_points(&kept))
        .ok_or_else(|| Error::InvalidInput("all rows share the same N".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slopes = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let resampled: Vec<RateRow> = rows
            .iter()
            .filter(|r| r.trials > 0)
            .map(|r| {
                let p = r.rate.min(1.0);
                let failures = Binomial::new(r.trials as u64, p).expect("p in [0, 1]").sample(&mut rng);
                RateRow::binomial(r.n, failures as usize, r.trials)
            })
            .filter(|r| r.rate > 0.0)
            .collect();
        if resampled.len() >= 2 {
            if let Some((s, _)) = weighted_line(&log_points(&resampled)) {
                slopes.push(s);
            }
        }
    }
    slopes.sort_by(f64::total_cmp);
    let ci = if slopes.is_empty() {
        (slope, slope)
    } else {
        let at = |q: f64| slopes[((q * (slopes.len() - 1) as f64).round() as usize).min(slopes.len() - 1)];
        (at(0.025), at(0.975))
    };
    Ok(FitResult::Fitted(Fit {
        slope,
        intercept,
        ci,
        excluded: zero.iter().map(|r| r.n).collect(),
        resamples_used: slopes.len(),
    }))
}

//! Conditioned samples and the electrostatic field
//! `E_N(w) = −N/w + Σ 1/(w − z_k)`.
//!
//! The field is always evaluated from zero locations, never from expanded
//! coefficients. Zeros are kept in a canonical order (lexicographic on real
//! then imaginary part) and summed with compensation, so every evaluation
//! is independent of the order in which the zeros were supplied.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::ZeroMeasure;
use crate::sphere::{geodesic_distance, ChartPoint, Contour};
use crate::summation::{ComplexCompensatedSum, CompensatedSum};

/// Chart distance below which `w` counts as sitting on a zero (or on the
/// pole at `w = 0`).
pub const POLE_TOLERANCE: f64 = 1e-12;

/// One polynomial of degree `N`: pinned zeros plus `N − |pinned|` random
/// zeros.
#[derive(Debug, Clone)]
pub struct ConditionedSample {
    degree: usize,
    pinned: Vec<Complex64>,
    random_zeros: Vec<Complex64>,
    measure_id: String,
    ordered: Vec<Complex64>,
}

fn canonical_order(zeros: &mut [Complex64]) {
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

impl ConditionedSample {
    pub fn new(pinned: Vec<Complex64>, random_zeros: Vec<Complex64>, measure_id: impl Into<String>) -> Result<Self> {
        let degree = pinned.len() + random_zeros.len();
        if degree < 2 {
            return Err(Error::InvalidInput(format!("degree must be at least 2, got {degree}")));
        }
        if let Some(z) = pinned.iter().chain(&random_zeros).find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput(format!("zeros must be finite chart values, got {z}")));
        }
        let mut ordered: Vec<Complex64> = pinned.iter().chain(&random_zeros).copied().collect();
        canonical_order(&mut ordered);
        Ok(ConditionedSample {
            degree,
            pinned,
            random_zeros,
            measure_id: measure_id.into(),
            ordered,
        })
    }

    /// Draws `degree − |pinned|` zeros from `measure`.
    pub fn draw<R: rand::Rng + ?Sized>(
        measure: &ZeroMeasure,
        pinned: Vec<Complex64>,
        degree: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if pinned.is_empty() || pinned.len() > degree {
            return Err(Error::InvalidInput(format!(
                "need between 1 and {degree} pinned zeros, got {}",
                pinned.len()
            )));
        }
        let random = measure.sample_zeros(degree - pinned.len(), rng);
        ConditionedSample::new(pinned, random, measure.id())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pinned(&self) -> &[Complex64] {
        &self.pinned
    }

    pub fn random_zeros(&self) -> &[Complex64] {
        &self.random_zeros
    }

    pub fn measure_id(&self) -> &str {
        &self.measure_id
    }

    /// All zeros in canonical order.
    pub fn zeros(&self) -> &[Complex64] {
        &self.ordered
    }

    fn check_pole(&self, w: Complex64) -> Result<()> {
        if w.norm() < POLE_TOLERANCE || self.ordered.iter().any(|z| (w - z).norm() < POLE_TOLERANCE) {
            return Err(Error::Pole(w));
        }
        Ok(())
    }

    /// `E_N(w)`; its finite zeros are the critical points of `p`.
    pub fn field(&self, w: Complex64) -> Result<Complex64> {
        self.check_pole(w)?;
        Ok(self.field_unchecked(w))
    }

    #[inline]
    pub(crate) fn field_unchecked(&self, w: Complex64) -> Complex64 {
        let mut acc = ComplexCompensatedSum::new();
        acc.add(-(self.degree as f64) / w);
        for z in &self.ordered {
            acc.add((w - z).inv());
        }
        acc.value()
    }

    /// `E_N′(w) = N/w² − Σ 1/(w − z_k)²`.
    pub fn field_derivative(&self, w: Complex64) -> Result<Complex64> {
        self.check_pole(w)?;
        let mut acc = ComplexCompensatedSum::new();
        acc.add(self.degree as f64 / (w * w));
        for z in &self.ordered {
            let d = (w - z).inv();
            acc.add(-d * d);
        }
        Ok(acc.value())
    }

    /// `sup` over the contour samples of `|E_N − E[E_N]|`, the fluctuation
    /// of the field around its average.
    pub fn fluctuation_sup_on_contour(&self, contour: &Contour, measure: &ZeroMeasure) -> Result<f64> {
        let nearest = self
            .ordered
            .iter()
            .map(|z| contour.distance_to(*z))
            .fold(f64::INFINITY, f64::min);
        if nearest <= POLE_TOLERANCE {
            return Err(Error::ContourThroughZero { distance: nearest });
        }
        let mut worst: f64 = 0.0;
        for w in contour.samples() {
            let actual = self.field(w)?;
            let mean = expected_field(measure, &self.pinned, self.degree, w)?;
            worst = worst.max((actual - mean).norm());
        }
        Ok(worst)
    }

    /// `𝒩(center, radius)` over all `N` zeros (geodesic distance).
    pub fn count_zeros_in_ball(&self, center: ChartPoint, radius: f64) -> usize {
        count_in_ball(&self.ordered, center, radius)
    }

    /// `𝒩(center, radius)` restricted to the random zeros.
    pub fn count_random_zeros_in_ball(&self, center: ChartPoint, radius: f64) -> usize {
        count_in_ball(&self.random_zeros, center, radius)
    }

    /// `S = Σ_random 1/|w0 − ξ_j|²` and whether `S > N^{2−2η}`.
    pub fn second_moment_event(&self, w0: Complex64, eta: f64) -> Result<MomentEvent> {
        if !(eta > 0.0 && eta < 0.5) {
            return Err(Error::InvalidInput(format!("eta must lie in (0, 1/2), got {eta}")));
        }
        let mut acc = CompensatedSum::new();
        for z in &self.random_zeros {
            let d = (w0 - z).norm_sqr();
            if d.sqrt() < POLE_TOLERANCE {
                return Err(Error::Pole(w0));
            }
            acc.add(1.0 / d);
        }
        let sum = acc.value();
        let threshold = (self.degree as f64).powf(2.0 - 2.0 * eta);
        Ok(MomentEvent {
            occurred: sum > threshold,
            sum,
            threshold,
        })
    }

    pub fn to_record(&self, seed: u64, trial_index: u64) -> SampleRecord {
        SampleRecord {
            n: self.degree,
            pinned: self.pinned.clone(),
            random_zeros: self.random_zeros.clone(),
            measure_id: self.measure_id.clone(),
            seed,
            trial_index,
        }
    }

    pub fn from_record(record: SampleRecord) -> Result<Self> {
        let sample = ConditionedSample::new(record.pinned, record.random_zeros, record.measure_id)?;
        if sample.degree != record.n {
            return Err(Error::InvalidInput(format!(
                "record declares N = {} but holds {} zeros",
                record.n, sample.degree
            )));
        }
        Ok(sample)
    }
}

fn count_in_ball(zeros: &[Complex64], center: ChartPoint, radius: f64) -> usize {
    zeros
        .iter()
        .filter(|z| geodesic_distance(ChartPoint::Finite(**z), center) <= radius)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEvent {
    pub occurred: bool,
    pub sum: f64,
    pub threshold: f64,
}

/// Serialized sample for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub pinned: Vec<Complex64>,
    pub random_zeros: Vec<Complex64>,
    pub measure_id: String,
    pub seed: u64,
    pub trial_index: u64,
}

/// `E[E_N(w)] = −N/w + Σ_pinned 1/(w − ξ) + (N − |pinned|)·φ_μ(w)`.
pub fn expected_field(measure: &ZeroMeasure, pinned: &[Complex64], degree: usize, w: Complex64) -> Result<Complex64> {
    if w.norm() < POLE_TOLERANCE || pinned.iter().any(|x| (w - x).norm() < POLE_TOLERANCE) {
        return Err(Error::Pole(w));
    }
    if pinned.len() > degree {
        return Err(Error::InvalidInput("more pinned zeros than the degree".into()));
    }
    let phi = measure.cauchy_field(ChartPoint::Finite(w))?.value;
    Ok(pinned_field(pinned, degree, w) + phi * (degree - pinned.len()) as f64)
}

/// The deterministic part `−N/w + Σ_pinned 1/(w − ξ)`.
pub(crate) fn pinned_field(pinned: &[Complex64], degree: usize, w: Complex64) -> Complex64 {
    let mut acc = ComplexCompensatedSum::new();
    acc.add(-(degree as f64) / w);
    for x in pinned {
        acc.add((w - x).inv());
    }
    acc.value()
}

/// Complex derivative of [`pinned_field`].
pub(crate) fn pinned_field_derivative(pinned: &[Complex64], degree: usize, w: Complex64) -> Complex64 {
    let mut acc = ComplexCompensatedSum::new();
    acc.add(degree as f64 / (w * w));
    for x in pinned {
        let d = (w - x).inv();
        acc.add(-d * d);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(pinned: &[Complex64], random: &[Complex64]) -> ConditionedSample {
        ConditionedSample::new(pinned.to_vec(), random.to_vec(), "test").unwrap()
    }

    #[test]
    fn field_examples() {
        let s = sample(&[c(1.0, 0.0)], &[c(-1.0, 0.0)]);
        assert_abs_diff_eq!((s.field(c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        let s = sample(&[c(1.0, 0.0)], &[c(0.0, 1.0)]);
        assert_abs_diff_eq!(s.field(c(1.0, 1.0)).unwrap().norm(), 0.0, epsilon = 1e-15);
        assert!(matches!(s.field(c(0.0, 1.0)), Err(Error::Pole(_))));
        assert!(matches!(s.field(c(0.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn expected_field_decomposition() {
        let u = ZeroMeasure::uniform();
        let w = c(1.2, 0.0);
        let e = expected_field(&u, &[c(1.0, 0.0)], 10, w).unwrap();
        // −10/1.2 + 1/0.2 + 9·φ(1.2), φ(1.2) = 1.2/(1+1.44)
        let want = -10.0 / 1.2 + 5.0 + 9.0 * 1.2 / 2.44;
        assert_abs_diff_eq!(e.re, want, epsilon = 1e-12);
        assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-12);
        // −10/1.2 + 1/0.2
        assert_abs_diff_eq!(pinned_field(&[c(1.0, 0.0)], 10, w).re, -10.0 / 3.0, epsilon = 1e-12);
        assert!(expected_field(&u, &[c(1.0, 0.0)], 10, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn deterministic_sample_has_no_fluctuation() {
        let s = sample(&[c(1.0, 0.0), c(-1.0, 0.5)], &[]);
        let contour = Contour::new(c(0.5, 0.5), 0.1, 64).unwrap();
        let sup = s.fluctuation_sup_on_contour(&contour, &ZeroMeasure::uniform()).unwrap();
        assert!(sup < 1e-13, "{sup}");
    }

    #[test]
    fn contour_through_zero_is_rejected() {
        let s = sample(&[c(1.0, 0.0)], &[c(1.1, 0.0)]);
        let contour = Contour::new(c(1.0, 0.0), 0.1, 64).unwrap();
        assert!(matches!(
            s.fluctuation_sup_on_contour(&contour, &ZeroMeasure::uniform()),
            Err(Error::ContourThroughZero { .. })
        ));
    }

    #[test]
    fn ball_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = ConditionedSample::draw(&ZeroMeasure::uniform(), vec![c(1.0, 0.0)], 50, &mut rng).unwrap();
        assert_eq!(s.count_zeros_in_ball(ChartPoint::new(0.3, 0.3), PI), 50);
        assert_eq!(s.count_random_zeros_in_ball(ChartPoint::new(0.3, 0.3), PI), 49);
        assert_eq!(s.count_zeros_in_ball(ChartPoint::new(0.3, 0.3), 1e-300), 0);
        let mut last = 0;
        for k in 0..=40 {
            let n = s.count_zeros_in_ball(ChartPoint::Omega, PI * k as f64 / 40.0);
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn moment_event_examples() {
        let s = sample(&[c(1.0, 0.0), c(-1.0, 0.0)], &[]);
        let e = s.second_moment_event(c(0.0, 2.0), 0.25).unwrap();
        assert!(!e.occurred);
        assert_eq!(e.sum, 0.0);
        let s = sample(&[c(1.0, 0.0)], &[c(3.0, 0.0)]);
        let e = s.second_moment_event(c(1.0, 1.0), 0.25).unwrap();
        assert_abs_diff_eq!(e.sum, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(e.threshold, 2f64.powf(1.5), epsilon = 1e-12);
        assert!(!e.occurred);
        assert!(matches!(s.second_moment_event(c(3.0, 0.0), 0.25), Err(Error::Pole(_))));
        assert!(s.second_moment_event(c(0.0, 1.0), 0.5).is_err());
    }

    #[test]
    fn record_round_trip() {
        let s = sample(&[c(1.0, 0.0)], &[c(0.25, -3.5), c(1e-7, 2e6)]);
        let json = serde_json::to_string(&s.to_record(9, 4)).unwrap();
        assert!(json.contains("\"N\":3"));
        let back = ConditionedSample::from_record(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.zeros(), s.zeros());
        assert_eq!(back.pinned(), s.pinned());
    }

    /// Exact coefficient expansion of `q = ∏(w − z_k)`, lowest degree first.
    fn expand(zeros: &[Complex64]) -> Vec<Complex64> {
        let mut coeffs = vec![c(1.0, 0.0)];
        for z in zeros {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * z;
            }
            coeffs = next;
        }
        coeffs
    }

    fn horner(coeffs: &[Complex64], w: Complex64) -> Complex64 {
        coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * w + a)
    }

    fn zero_strategy() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((0.2f64..3.0, 0.0f64..std::f64::consts::TAU), 2..12)
            .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
    }

    proptest! {
        #[test]
        fn field_is_coefficient_ratio(zeros in zero_strategy(), wr in 0.1f64..4.0, wt in 0.0f64..std::f64::consts::TAU) {
            let w = Complex64::from_polar(wr, wt);
            prop_assume!(zeros.iter().all(|z| (w - z).norm() > 0.05));
            let n = zeros.len();
            let q = expand(&zeros);
            // r(w) = w q'(w) − N q(w) has coefficients (k − N) q_k.
            let r: Vec<Complex64> = q.iter().enumerate().map(|(k, a)| a * (k as f64 - n as f64)).collect();
            let want = horner(&r, w) / (w * horner(&q, w));
            let s = ConditionedSample::new(vec![zeros[0]], zeros[1..].to_vec(), "t").unwrap();
            let got = s.field(w).unwrap();
            prop_assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "{} vs {}", got, want);
        }

        #[test]
        fn field_ignores_zero_order(zeros in zero_strategy(), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            let mut shuffled = zeros.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let a = ConditionedSample::new(vec![zeros[0]], zeros[1..].to_vec(), "t").unwrap();
            let b = ConditionedSample::new(vec![shuffled[0]], shuffled[1..].to_vec(), "t").unwrap();
            let w = c(0.37, -0.21);
            prop_assert_eq!(a.field(w).unwrap(), b.field(w).unwrap());
        }
    }
}

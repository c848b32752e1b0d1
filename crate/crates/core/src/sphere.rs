//! Geometry of the unit round sphere in the chart `w` centered at `∞`.
//!
//! The chart origin `w = 0` is the distinguished point `∞` (the pole of the
//! polynomial) and the chart's point at infinity is its antipode `0̲`,
//! represented by [`ChartPoint::Omega`]. Distances are measured on the
//! sphere of radius 1, so antipodal points are `π` apart.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `S²` in the chart centered at `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartPoint {
    Finite(Complex64),
    /// The chart's point at infinity, `0̲`.
    Omega,
}

impl ChartPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ChartPoint::Finite(Complex64::new(re, im))
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            ChartPoint::Finite(w) => Some(w),
            ChartPoint::Omega => None,
        }
    }

    pub fn is_omega(self) -> bool {
        matches!(self, ChartPoint::Omega)
    }

    /// Inverse stereographic image on the unit sphere; `w = 0` goes to the
    /// south pole and `Omega` to the north pole.
    pub fn to_unit_vector(self) -> [f64; 3] {
        match self {
            ChartPoint::Omega => [0.0, 0.0, 1.0],
            ChartPoint::Finite(w) => {
                let n = w.norm_sqr();
                let d = 1.0 + n;
                [2.0 * w.re / d, 2.0 * w.im / d, (n - 1.0) / d]
            }
        }
    }

    /// Chart coordinate of a unit vector (inverse of [`to_unit_vector`]).
    ///
    /// [`to_unit_vector`]: ChartPoint::to_unit_vector
    pub fn from_unit_vector(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        if z >= 1.0 {
            return ChartPoint::Omega;
        }
        // Use the better conditioned of the two equivalent expressions.
        if z <= 0.0 {
            ChartPoint::Finite(Complex64::new(x, y) / (1.0 - z))
        } else {
            let rho2 = (1.0 + z) / (1.0 - z);
            let h = x.hypot(y);
            if h == 0.0 {
                return ChartPoint::Omega;
            }
            ChartPoint::Finite(Complex64::new(x, y) * (rho2.sqrt() / h))
        }
    }
}

impl From<Complex64> for ChartPoint {
    fn from(w: Complex64) -> Self {
        ChartPoint::Finite(w)
    }
}

/// Great-circle distance on the unit sphere, in `[0, π]`.
///
/// Uses `2·atan2(|a − b|, |1 + a·conj(b)|)`, which equals
/// `2·arcsin(chordal/2)` but stays accurate near antipodal pairs.
pub fn geodesic_distance(a: ChartPoint, b: ChartPoint) -> f64 {
    match (a, b) {
        (ChartPoint::Omega, ChartPoint::Omega) => 0.0,
        (ChartPoint::Finite(w), ChartPoint::Omega) | (ChartPoint::Omega, ChartPoint::Finite(w)) => {
            2.0 * 1.0f64.atan2(w.norm())
        }
        (ChartPoint::Finite(a), ChartPoint::Finite(b)) => {
            2.0 * (a - b).norm().atan2((1.0 + a * b.conj()).norm())
        }
    }
}

/// Euclidean distance between the images on the unit sphere, in `[0, 2]`.
pub fn chordal_distance(a: ChartPoint, b: ChartPoint) -> f64 {
    match (a, b) {
        (ChartPoint::Omega, ChartPoint::Omega) => 0.0,
        (ChartPoint::Finite(w), ChartPoint::Omega) | (ChartPoint::Omega, ChartPoint::Finite(w)) => {
            2.0 / (1.0 + w.norm_sqr()).sqrt()
        }
        (ChartPoint::Finite(a), ChartPoint::Finite(b)) => {
            2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
        }
    }
}

/// `w ↦ −1/conj(w)`, with `0 ↔ Omega`.
pub fn antipode(p: ChartPoint) -> ChartPoint {
    match p {
        ChartPoint::Omega => ChartPoint::Finite(Complex64::new(0.0, 0.0)),
        ChartPoint::Finite(w) if w == Complex64::new(0.0, 0.0) => ChartPoint::Omega,
        ChartPoint::Finite(w) => ChartPoint::Finite(-1.0 / w.conj()),
    }
}

/// Ratio of geodesic to chart length at `w` (the conformal factor).
pub fn metric_factor(w: Complex64) -> f64 {
    2.0 / (1.0 + w.norm_sqr())
}

/// Probability mass of a geodesic ball of the given radius under the
/// uniform measure: `sin²(R/2)`.
pub fn uniform_ball_mass(radius: f64) -> f64 {
    if radius >= PI {
        return 1.0;
    }
    let s = (0.5 * radius.max(0.0)).sin();
    s * s
}

/// A positively oriented circle in the chart, sampled at equally spaced
/// angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub center: Complex64,
    pub chart_radius: f64,
    pub sample_count: usize,
}

pub const MIN_CONTOUR_SAMPLES: usize = 64;

impl Contour {
    pub fn new(center: Complex64, chart_radius: f64, sample_count: usize) -> Result<Self> {
        if !(chart_radius > 0.0 && chart_radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "contour radius must be positive, got {chart_radius}"
            )));
        }
        if sample_count < MIN_CONTOUR_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "contour needs at least {MIN_CONTOUR_SAMPLES} samples, got {sample_count}"
            )));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidInput("contour center must be finite".into()));
        }
        Ok(Contour {
            center,
            chart_radius,
            sample_count,
        })
    }

    pub fn with_sample_count(self, sample_count: usize) -> Result<Self> {
        Contour::new(self.center, self.chart_radius, sample_count)
    }

    #[inline]
    pub fn point_at(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.chart_radius, theta)
    }

    pub fn angle(&self, k: usize) -> f64 {
        2.0 * PI * (k as f64) / (self.sample_count as f64)
    }

    pub fn samples(&self) -> Vec<Complex64> {
        (0..self.sample_count).map(|k| self.point_at(self.angle(k))).collect()
    }

    /// Strictly inside the chart disk bounded by the contour.
    pub fn encloses(&self, w: Complex64) -> bool {
        (w - self.center).norm() < self.chart_radius
    }

    /// Chart distance from `w` to the circle.
    pub fn distance_to(&self, w: Complex64) -> f64 {
        ((w - self.center).norm() - self.chart_radius).abs()
    }

    /// Chart arc length between consecutive samples.
    pub fn sample_spacing(&self) -> f64 {
        2.0 * PI * self.chart_radius / self.sample_count as f64
    }
}

/// Chart circle whose points are exactly at geodesic distance `radius`
/// from `center`. Stereographic projection maps circles to circles, but
/// the chart center is shifted along the ray through `center`.
///
/// Returns `(chart_center, chart_radius)`. Requires the ball to stay away
/// from `0̲`.
pub(crate) fn geodesic_ball_in_chart(center: Complex64, radius: f64) -> Result<(Complex64, f64)> {
    let rho = center.norm();
    // Polar angle measured from the chart origin.
    let psi = 2.0 * rho.atan();
    if psi + radius >= PI {
        return Err(Error::InvalidInput(format!(
            "geodesic ball of radius {radius} around {center} contains the point at infinity of the chart"
        )));
    }
    let outer = (0.5 * (psi + radius)).tan();
    let inner = (0.5 * (psi - radius)).tan();
    let direction = if rho > 0.0 {
        center / rho
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok((direction * (0.5 * (outer + inner)), 0.5 * (outer - inner)))
}

/// Geodesic circle of small radius around a finite, nonzero point.
///
/// The returned chart circle is the exact image of the geodesic circle;
/// to first order its chart radius is `radius·(1 + |center|²)/2`.
pub fn geodesic_circle(center: ChartPoint, geodesic_radius: f64, samples: usize) -> Result<Contour> {
    let c = match center {
        ChartPoint::Omega => {
            return Err(Error::InvalidInput(
                "geodesic circle around the chart's point at infinity".into(),
            ))
        }
        ChartPoint::Finite(c) if c == Complex64::new(0.0, 0.0) => {
            return Err(Error::InvalidInput("geodesic circle around the pole w = 0".into()))
        }
        ChartPoint::Finite(c) => c,
    };
    if !(geodesic_radius > 0.0 && geodesic_radius < 0.1) {
        return Err(Error::InvalidInput(format!(
            "geodesic radius must lie in (0, 0.1), got {geodesic_radius}"
        )));
    }
    let (chart_center, chart_radius) = geodesic_ball_in_chart(c, geodesic_radius)?;
    Contour::new(chart_center, chart_radius, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ChartPoint {
        ChartPoint::new(re, im)
    }

    #[test]
    fn distance_examples() {
        let w = c(0.3, -2.0);
        assert_eq!(geodesic_distance(w, w), 0.0);
        assert_abs_diff_eq!(geodesic_distance(c(0.0, 0.0), ChartPoint::Omega), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(geodesic_distance(c(0.0, 0.0), c(1.0, 0.0)), PI / 2.0, epsilon = 1e-15);
        // Agrees with the chordal form.
        let (a, b) = (c(0.4, 0.1), c(-1.2, 2.0));
        let chordal = chordal_distance(a, b);
        assert_abs_diff_eq!(
            geodesic_distance(a, b),
            2.0 * (chordal / 2.0).asin(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(c(1.0, 0.0)), c(-1.0, 0.0));
        let i = antipode(c(0.0, 1.0)).finite().unwrap();
        assert_abs_diff_eq!(i.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(i.im, -1.0, epsilon = 1e-15);
        assert_eq!(antipode(c(0.0, 0.0)), ChartPoint::Omega);
        assert_eq!(antipode(ChartPoint::Omega), c(0.0, 0.0));
    }

    #[test]
    fn unit_vector_round_trip() {
        for w in [c(0.0, 0.0), c(1.0, 0.0), c(-3.0, 0.5), c(1e-4, 2e5)] {
            let back = ChartPoint::from_unit_vector(w.to_unit_vector());
            assert!(geodesic_distance(w, back) < 1e-12, "{w:?} -> {back:?}");
        }
        assert_eq!(ChartPoint::from_unit_vector([0.0, 0.0, 1.0]), ChartPoint::Omega);
    }

    #[test]
    fn circle_chart_radii() {
        let one = geodesic_circle(c(1.0, 0.0), 0.01, 128).unwrap();
        // Exact value is tan(0.01); first order gives 0.01.
        assert_abs_diff_eq!(one.chart_radius, 0.01, epsilon = 1e-6);
        assert_abs_diff_eq!(one.chart_radius, 0.01f64.tan(), epsilon = 1e-15);
        let half = geodesic_circle(c(0.5, 0.0), 0.02, 128).unwrap();
        assert_abs_diff_eq!(half.chart_radius, 0.0125, epsilon = 1e-5);
    }

    #[test]
    fn circle_samples_at_requested_distance() {
        let center = c(1.0, 0.0);
        let contour = geodesic_circle(center, 0.01, 128).unwrap();
        let worst = contour
            .samples()
            .into_iter()
            .map(|w| (geodesic_distance(w.into(), center) - 0.01).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-5, "max deviation {worst}");
    }

    #[test]
    fn circle_rejects_bad_input() {
        assert!(geodesic_circle(ChartPoint::Omega, 0.01, 128).is_err());
        assert!(geodesic_circle(c(0.0, 0.0), 0.01, 128).is_err());
        assert!(geodesic_circle(c(1.0, 0.0), 0.2, 128).is_err());
        assert!(geodesic_circle(c(1.0, 0.0), 0.01, 16).is_err());
        assert!(geodesic_circle(c(1e9, 0.0), 0.01, 128).is_err());
    }

    #[test]
    fn uniform_ball_mass_limits() {
        assert_eq!(uniform_ball_mass(PI), 1.0);
        assert_abs_diff_eq!(uniform_ball_mass(PI / 2.0), 0.5, epsilon = 1e-15);
        assert_eq!(uniform_ball_mass(0.0), 0.0);
    }

    fn arb_point() -> impl Strategy<Value = ChartPoint> {
        (-3.0f64..3.0, -3.0f64..3.0, 0u8..20).prop_map(|(lr, th, tag)| {
            if tag == 0 {
                ChartPoint::Omega
            } else {
                ChartPoint::Finite(Complex64::from_polar(10f64.powf(lr), th))
            }
        })
    }

    fn invert(p: ChartPoint) -> ChartPoint {
        match p {
            ChartPoint::Omega => c(0.0, 0.0),
            ChartPoint::Finite(w) if w.norm() == 0.0 => ChartPoint::Omega,
            ChartPoint::Finite(w) => ChartPoint::Finite(1.0 / w),
        }
    }

    proptest! {
        #[test]
        fn inversion_is_an_isometry(a in arb_point(), b in arb_point()) {
            let d = geodesic_distance(a, b);
            let di = geodesic_distance(invert(a), invert(b));
            prop_assert!((d - di).abs() <= 1e-12, "{} vs {}", d, di);
        }

        #[test]
        fn antipode_is_an_involution(p in arb_point()) {
            let back = antipode(antipode(p));
            prop_assert!(geodesic_distance(p, back) <= 1e-12);
            prop_assert!((geodesic_distance(p, antipode(p)) - PI).abs() <= 1e-12);
        }

        #[test]
        fn distance_is_a_metric(a in arb_point(), b in arb_point(), m in arb_point()) {
            let ab = geodesic_distance(a, b);
            prop_assert!((0.0..=PI).contains(&ab));
            prop_assert!((ab - geodesic_distance(b, a)).abs() <= 1e-15);
            prop_assert!(ab <= geodesic_distance(a, m) + geodesic_distance(m, b) + 1e-12);
        }

        #[test]
        fn small_circles_track_geodesic_radius(
            lr in -1.0f64..1.0, th in 0.0f64..std::f64::consts::TAU, radius in 1e-4f64..0.01
        ) {
            let center = ChartPoint::Finite(Complex64::from_polar(10f64.powf(lr), th));
            let contour = geodesic_circle(center, radius, 64).unwrap();
            for w in contour.samples() {
                let d = geodesic_distance(w.into(), center);
                prop_assert!(((d - radius) / radius).abs() <= 1e-3);
            }
        }
    }
}

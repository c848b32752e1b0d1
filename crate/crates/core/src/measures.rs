//! Probability measures on `S²` with bounded density with respect to the
//! uniform measure, expressed through their pushforward to the `w` chart.
//!
//! The mean field of one zero drawn from `μ` is the Cauchy transform
//! `φ_μ(w) = ∫ dμ(ζ) / (w − ζ)`. For a rotation-invariant measure only the
//! mass enclosed by the circle `|ζ| = |w|` contributes, which gives the
//! closed form `φ_μ(w) = M(|w|)/w`. Every measure can also be pushed
//! through a two-dimensional quadrature in polar coordinates around `w`;
//! the `1/(w − ζ)` singularity cancels against the area element there.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Open01};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, integrate_to_infinity, Tolerance};
use crate::sphere::{geodesic_ball_in_chart, uniform_ball_mass, ChartPoint};

/// Rotation-invariant (about the `∞`–`0̲` axis) measures with a closed-form
/// enclosed-mass function `M(ρ) = μ{|ζ| ≤ ρ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum RadialProfile {
    /// Standard complex Gaussian in the coordinate `z = 1/w`, i.e.
    /// concentrated around `0̲`. `M(ρ) = exp(−1/ρ²)`.
    GaussianAtOmega,
    /// Uniform measure conditioned on the chart disk `|ζ| ≤ radius`.
    Cap { radius: f64 },
}

impl RadialProfile {
    pub fn enclosed_mass(&self, rho: f64) -> f64 {
        match *self {
            RadialProfile::GaussianAtOmega => {
                if rho <= 0.0 {
                    0.0
                } else {
                    (-1.0 / (rho * rho)).exp()
                }
            }
            RadialProfile::Cap { radius } => {
                let r = rho.min(radius);
                let cap = radius * radius / (1.0 + radius * radius);
                (r * r / (1.0 + r * r)) / cap
            }
        }
    }

    /// Radius `ρ` with `M(ρ) = u`, for `u ∈ (0, 1)`.
    pub fn inverse_mass(&self, u: f64) -> f64 {
        match *self {
            RadialProfile::GaussianAtOmega => 1.0 / (-u.ln()).sqrt(),
            RadialProfile::Cap { radius } => {
                let t = u * radius * radius / (1.0 + radius * radius);
                (t / (1.0 - t)).sqrt()
            }
        }
    }

    /// Density with respect to the uniform measure.
    pub fn density(&self, w: Complex64) -> f64 {
        match *self {
            RadialProfile::GaussianAtOmega => {
                let n = w.norm_sqr();
                if n == 0.0 {
                    return 0.0;
                }
                let z2 = 1.0 / n;
                (-z2).exp() * (1.0 + z2) * (1.0 + z2)
            }
            RadialProfile::Cap { radius } => {
                if w.norm() <= radius {
                    (1.0 + radius * radius) / (radius * radius)
                } else {
                    0.0
                }
            }
        }
    }

    /// Supremum of [`density`](RadialProfile::density).
    pub fn natural_bound(&self) -> f64 {
        match *self {
            // max of e^{-t}(1+t)² is at t = 1.
            RadialProfile::GaussianAtOmega => 4.0 / std::f64::consts::E,
            RadialProfile::Cap { radius } => (1.0 + radius * radius) / (radius * radius),
        }
    }

    fn jump_radii(&self) -> Vec<f64> {
        match *self {
            RadialProfile::GaussianAtOmega => Vec::new(),
            RadialProfile::Cap { radius } => vec![radius],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureKind {
    Uniform,
    Radial(RadialProfile),
    /// Density `1 + strength·⟨x, axis⟩` with respect to uniform, where `x`
    /// is the point on the unit sphere. No closed-form Cauchy transform.
    Tilted { axis: [f64; 3], strength: f64 },
}

impl MeasureKind {
    fn natural_bound(&self) -> f64 {
        match self {
            MeasureKind::Uniform => 1.0,
            MeasureKind::Radial(p) => p.natural_bound(),
            MeasureKind::Tilted { strength, .. } => 1.0 + strength.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyFieldValue {
    pub value: Complex64,
    pub method: FieldMethod,
    /// Absolute error estimate; zero for closed forms.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExceptionalStatus {
    Clear,
    Exceptional,
}

/// Absolute error target of the quadrature route.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroMeasure {
    pub kind: MeasureKind,
    pub density_bound: f64,
}

/// Uniform probability density in the `w` chart (w.r.t. Lebesgue measure).
#[inline]
pub fn uniform_chart_density(w: Complex64) -> f64 {
    let d = 1.0 + w.norm_sqr();
    1.0 / (PI * d * d)
}

impl ZeroMeasure {
    /// Validates the declared density bound on a grid of chart points.
    pub fn new(kind: MeasureKind, density_bound: f64) -> Result<Self> {
        if !(density_bound >= 1.0 && density_bound.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "density bound must be a finite number >= 1, got {density_bound}"
            )));
        }
        match kind {
            MeasureKind::Radial(RadialProfile::Cap { radius }) if !(radius > 0.0 && radius.is_finite()) => {
                return Err(Error::InvalidInput(format!("cap radius must be positive, got {radius}")))
            }
            MeasureKind::Tilted { axis, strength } => {
                let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
                if !((n - 1.0).abs() < 1e-9) {
                    return Err(Error::InvalidInput("tilt axis must be a unit vector".into()));
                }
                if !(strength.abs() < 1.0) {
                    return Err(Error::InvalidInput("tilt strength must lie in (-1, 1)".into()));
                }
            }
            _ => {}
        }
        let measure = ZeroMeasure { kind, density_bound };
        measure.spot_check_bound()?;
        Ok(measure)
    }

    pub fn uniform() -> Self {
        ZeroMeasure {
            kind: MeasureKind::Uniform,
            density_bound: 1.0,
        }
    }

    pub fn gaussian_at_omega() -> Self {
        let kind = MeasureKind::Radial(RadialProfile::GaussianAtOmega);
        ZeroMeasure {
            kind,
            density_bound: kind.natural_bound(),
        }
    }

    pub fn cap(radius: f64) -> Result<Self> {
        let kind = MeasureKind::Radial(RadialProfile::Cap { radius });
        ZeroMeasure::new(kind, if radius > 0.0 { kind.natural_bound() } else { 1.0 })
    }

    pub fn tilted(axis: [f64; 3], strength: f64) -> Result<Self> {
        let kind = MeasureKind::Tilted { axis, strength };
        ZeroMeasure::new(kind, kind.natural_bound())
    }

    /// Short identifier used in records and summaries.
    pub fn id(&self) -> String {
        match self.kind {
            MeasureKind::Uniform => "uniform".into(),
            MeasureKind::Radial(RadialProfile::GaussianAtOmega) => "gaussian-omega".into(),
            MeasureKind::Radial(RadialProfile::Cap { radius }) => format!("cap:{radius}"),
            MeasureKind::Tilted { axis, strength } => {
                format!("tilted:{strength}:{},{},{}", axis[0], axis[1], axis[2])
            }
        }
    }

    fn spot_check_bound(&self) -> Result<()> {
        for i in 0..=80 {
            let rho = if i == 0 { 0.0 } else { 10f64.powf(-3.0 + 6.0 * i as f64 / 80.0) };
            for k in 0..16 {
                let w = Complex64::from_polar(rho, 2.0 * PI * k as f64 / 16.0 + 0.1);
                let f = self.density(w);
                if !(f >= 0.0) || f > self.density_bound * (1.0 + 1e-9) {
                    return Err(Error::DensityBound {
                        at: w,
                        value: f,
                        bound: self.density_bound,
                    });
                }
            }
        }
        Ok(())
    }

    /// Density with respect to the uniform measure.
    pub fn density(&self, w: Complex64) -> f64 {
        match self.kind {
            MeasureKind::Uniform => 1.0,
            MeasureKind::Radial(p) => p.density(w),
            MeasureKind::Tilted { axis, strength } => {
                let x = ChartPoint::Finite(w).to_unit_vector();
                1.0 + strength * (x[0] * axis[0] + x[1] * axis[1] + x[2] * axis[2])
            }
        }
    }

    /// Probability density in the chart with respect to Lebesgue measure.
    pub fn chart_density(&self, w: Complex64) -> f64 {
        self.density(w) * uniform_chart_density(w)
    }

    /// Enclosed mass `μ{|ζ| ≤ ρ}` for rotation-invariant measures.
    pub fn enclosed_mass(&self, rho: f64) -> Option<f64> {
        match self.kind {
            MeasureKind::Uniform => Some(rho * rho / (1.0 + rho * rho)),
            MeasureKind::Radial(p) => Some(p.enclosed_mass(rho)),
            MeasureKind::Tilted { .. } => None,
        }
    }

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
        let u: f64 = Open01.sample(rng);
        let theta = 2.0 * PI * rng.random::<f64>();
        Complex64::from_polar((u / (1.0 - u)).sqrt(), theta)
    }

    /// One draw from the measure, as a finite chart value.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self.kind {
            MeasureKind::Uniform => Self::sample_uniform(rng),
            MeasureKind::Radial(p) => {
                let u: f64 = Open01.sample(rng);
                let theta = 2.0 * PI * rng.random::<f64>();
                Complex64::from_polar(p.inverse_mass(u), theta)
            }
            MeasureKind::Tilted { .. } => loop {
                let w = Self::sample_uniform(rng);
                if rng.random::<f64>() * self.density_bound < self.density(w) {
                    break w;
                }
            },
        }
    }

    /// `count` i.i.d. draws; a pure function of the rng state.
    pub fn sample_zeros<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Complex64> {
        (0..count).map(|_| self.sample(rng)).collect()
    }

    /// Closed-form Cauchy transform, when one exists.
    pub fn cauchy_closed_form(&self, w: Complex64) -> Option<Complex64> {
        let rho = w.norm();
        if rho == 0.0 {
            // M(ρ)/ρ → 0 for every bundled radial measure.
            return matches!(self.kind, MeasureKind::Uniform | MeasureKind::Radial(_)).then_some(Complex64::new(0.0, 0.0));
        }
        match self.kind {
            MeasureKind::Uniform => Some(w.conj() / (1.0 + rho * rho)),
            MeasureKind::Radial(p) => Some(p.enclosed_mass(rho) / w),
            MeasureKind::Tilted { .. } => None,
        }
    }

    /// `φ_μ(w)`, by closed form when available and quadrature otherwise.
    pub fn cauchy_field(&self, w: ChartPoint) -> Result<CauchyFieldValue> {
        let w = w
            .finite()
            .ok_or_else(|| Error::InvalidInput("Cauchy transform is evaluated at finite points".into()))?;
        match self.cauchy_closed_form(w) {
            Some(value) => Ok(CauchyFieldValue {
                value,
                method: FieldMethod::ClosedForm,
                error: 0.0,
            }),
            None => self.cauchy_field_quadrature(w),
        }
    }

    /// Chart radii at which circles centered at `w` cross a density jump.
    fn jump_breakpoints(&self, w: Complex64) -> Vec<f64> {
        match self.kind {
            MeasureKind::Radial(p) => p
                .jump_radii()
                .into_iter()
                .flat_map(|a| [(w.norm() - a).abs(), w.norm() + a])
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Angles in `[0, 2π]` at which the circle `center + s·e^{iθ}` crosses
    /// a density jump, with both ends included.
    fn angular_breakpoints(&self, center: Complex64, s: f64) -> Vec<f64> {
        let mut angles = vec![0.0, 2.0 * PI];
        if let MeasureKind::Radial(p) = self.kind {
            let rho = center.norm();
            for a in p.jump_radii() {
                // |center + s·e^{iθ}| = a  ⇔  cos(θ − arg center) = c
                let c = (a * a - rho * rho - s * s) / (2.0 * rho * s);
                if rho > 0.0 && c.abs() < 1.0 {
                    let spread = c.acos();
                    for t in [center.arg() + spread, center.arg() - spread] {
                        angles.push(t.rem_euclid(2.0 * PI));
                    }
                }
            }
        }
        angles.sort_by(f64::total_cmp);
        angles
    }

    /// `φ_μ(w)` by two-dimensional quadrature, whatever the measure.
    ///
    /// With `ζ = w + s·e^{iθ}` the integrand becomes
    /// `−ρ(w + s·e^{iθ})·e^{−iθ}`, which is bounded.
    pub fn cauchy_field_quadrature(&self, w: Complex64) -> Result<CauchyFieldValue> {
        let inner_tol = Tolerance {
            absolute: 1e-12,
            relative: 1e-13,
            max_intervals: 4000,
        };
        let mut inner_failures = 0usize;
        let mut ring = |s: f64| -> Complex64 {
            let r = integrate_panels(
                &mut |theta| {
                    let e = Complex64::from_polar(1.0, theta);
                    e.conj() * self.chart_density(w + e * s)
                },
                &self.angular_breakpoints(w, s),
                inner_tol,
            );
            if !r.converged {
                inner_failures += 1;
            }
            -r.value
        };

        let rho = w.norm();
        let mut breaks = vec![0.0, rho, 2.0 * rho + 2.0];
        breaks.extend(self.jump_breakpoints(w));
        breaks.retain(|b| b.is_finite() && *b >= 0.0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
        let far = *breaks.last().expect("nonempty") + 1.0;
        breaks.push(far);

        let outer_tol = Tolerance {
            absolute: 0.25 * QUADRATURE_TOLERANCE,
            relative: 0.0,
            max_intervals: 400,
        };
        let near = integrate_panels(&mut ring, &breaks, outer_tol);
        let tail = integrate_to_infinity(&mut ring, far, outer_tol);
        let value = near.value + tail.value;
        // Inner errors are bounded by their tolerance over the outer range.
        let error = near.error + tail.error + inner_tol.absolute * far;
        if !(near.converged && tail.converged) || inner_failures > 0 || error > QUADRATURE_TOLERANCE {
            return Err(Error::Quadrature { value, estimate: error });
        }
        Ok(CauchyFieldValue {
            value,
            method: FieldMethod::Quadrature,
            error,
        })
    }

    /// `μ` of the chart disk `|ζ − center| ≤ radius`, by quadrature.
    pub fn chart_disk_mass(&self, center: Complex64, radius: f64) -> Result<f64> {
        let tol = Tolerance {
            absolute: 1e-12,
            relative: 1e-10,
            max_intervals: 4000,
        };
        let mut failures = 0usize;
        let mut breaks = vec![0.0, radius];
        breaks.extend(self.jump_breakpoints(center).into_iter().filter(|b| *b < radius));
        breaks.sort_by(f64::total_cmp);
        let r = integrate_panels(
            &mut |s: f64| {
                let ring = integrate_panels(
                    &mut |theta| Complex64::new(self.chart_density(center + Complex64::from_polar(s, theta)), 0.0),
                    &self.angular_breakpoints(center, s),
                    tol,
                );
                if !ring.converged {
                    failures += 1;
                }
                ring.value * s
            },
            &breaks,
            tol,
        );
        if !r.converged || failures > 0 {
            return Err(Error::Quadrature {
                value: r.value,
                estimate: r.error,
            });
        }
        Ok(r.value.re)
    }

    /// `μ` of the closed geodesic ball of the given radius.
    pub fn geodesic_ball_mass(&self, center: ChartPoint, radius: f64) -> Result<f64> {
        if let MeasureKind::Uniform = self.kind {
            return Ok(uniform_ball_mass(radius));
        }
        let c = center
            .finite()
            .ok_or_else(|| Error::InvalidInput("ball mass around the chart's point at infinity".into()))?;
        let (chart_center, chart_radius) = geodesic_ball_in_chart(c, radius)?;
        self.chart_disk_mass(chart_center, chart_radius)
    }

    /// Whether `ξ` lies within `margin` of the exceptional set `S_μ`, where
    /// `−1/ξ + φ_μ(ξ)` is `0` or `∞`.
    pub fn exceptional_set_test(&self, xi: ChartPoint, margin: f64) -> Result<ExceptionalStatus> {
        if !(margin > 0.0) {
            return Err(Error::InvalidInput(format!("margin must be positive, got {margin}")));
        }
        let xi = match xi {
            ChartPoint::Omega => return Ok(ExceptionalStatus::Exceptional),
            ChartPoint::Finite(x) => x,
        };
        let rho = xi.norm();
        if rho < margin || rho > 1.0 / margin {
            return Ok(ExceptionalStatus::Exceptional);
        }
        let phi = self.cauchy_field(ChartPoint::Finite(xi))?.value;
        if (-1.0 / xi + phi).norm() < margin {
            Ok(ExceptionalStatus::Exceptional)
        } else {
            Ok(ExceptionalStatus::Clear)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use crate::quadrature::integrate;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn uniform_hemisphere_fraction() {
        let zs = ZeroMeasure::uniform().sample_zeros(100_000, &mut rng());
        let inside = zs.iter().filter(|w| w.norm() <= 1.0).count() as f64 / 1e5;
        assert!((inside - 0.5).abs() < 0.005, "{inside}");
    }

    #[test]
    fn gaussian_outer_fraction() {
        let zs = ZeroMeasure::gaussian_at_omega().sample_zeros(100_000, &mut rng());
        let outside = zs.iter().filter(|w| w.norm() >= 1.0).count() as f64 / 1e5;
        // P(|z| <= 1) for the unit complex Gaussian, by a 1-D integral oracle:
        // ∫_0^1 2r e^{-r²} dr.
        let oracle = integrate(|r| Complex64::new(2.0 * r * (-r * r).exp(), 0.0), 0.0, 1.0, Tolerance::default())
            .value
            .re;
        assert_abs_diff_eq!(oracle, 1.0 - (-1.0f64).exp(), epsilon = 1e-12);
        assert!((outside - oracle).abs() < 0.005, "{outside}");
    }

    #[test]
    fn empty_sample() {
        assert!(ZeroMeasure::uniform().sample_zeros(0, &mut rng()).is_empty());
    }

    #[test]
    fn closed_form_examples() {
        let g = ZeroMeasure::gaussian_at_omega();
        let v = g.cauchy_field(ChartPoint::new(2.0, 0.0)).unwrap();
        assert_eq!(v.method, FieldMethod::ClosedForm);
        assert_abs_diff_eq!(v.value.re, (-0.25f64).exp() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.value.re, 0.389_400_391, epsilon = 1e-8);

        let cap = ZeroMeasure::cap(1.0).unwrap();
        let v = cap.cauchy_field(ChartPoint::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.value.re, 0.5, epsilon = 1e-15);

        // Uniform is radial with M(ρ) = ρ²/(1+ρ²).
        let u = ZeroMeasure::uniform();
        let w = Complex64::new(0.7, -1.3);
        let v = u.cauchy_field(w.into()).unwrap().value;
        let m = u.enclosed_mass(w.norm()).unwrap();
        assert_abs_diff_eq!((v - m / w).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(u.cauchy_field(ChartPoint::new(0.0, 0.0)).unwrap().value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        for m in [ZeroMeasure::uniform(), ZeroMeasure::gaussian_at_omega(), ZeroMeasure::cap(1.0).unwrap()] {
            for w in [Complex64::new(2.0, 0.0), Complex64::new(0.3, 0.4), Complex64::new(-0.9, 1.05)] {
                let closed = m.cauchy_closed_form(w).unwrap();
                let quad = m.cauchy_field_quadrature(w).unwrap();
                assert!(quad.error <= QUADRATURE_TOLERANCE);
                assert!((closed - quad.value).norm() < 1e-6, "{} at {w}: {closed} vs {}", m.id(), quad.value);
            }
        }
    }

    #[test]
    fn far_field_is_unit_charge() {
        for m in [ZeroMeasure::uniform(), ZeroMeasure::gaussian_at_omega(), ZeroMeasure::cap(1.0).unwrap()] {
            let w = Complex64::from_polar(100.0, 0.3);
            let phi = m.cauchy_field(w.into()).unwrap().value;
            assert!((w * phi - 1.0).norm() <= 0.05, "{}", m.id());
        }
    }

    #[test]
    fn exceptional_examples() {
        let u = ZeroMeasure::uniform();
        assert_eq!(u.exceptional_set_test(ChartPoint::new(1.0, 0.0), 0.1).unwrap(), ExceptionalStatus::Clear);
        assert_eq!(u.exceptional_set_test(ChartPoint::Omega, 1e-6).unwrap(), ExceptionalStatus::Exceptional);
        assert_eq!(
            u.exceptional_set_test(ChartPoint::new(1e-3, 0.0), 0.1).unwrap(),
            ExceptionalStatus::Exceptional
        );
        // |−1 + e^{−1}| ≈ 0.632
        let g = ZeroMeasure::gaussian_at_omega();
        assert_eq!(g.exceptional_set_test(ChartPoint::new(1.0, 0.0), 0.1).unwrap(), ExceptionalStatus::Clear);
        assert!(u.exceptional_set_test(ChartPoint::new(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn declared_bound_is_checked() {
        let kind = MeasureKind::Radial(RadialProfile::Cap { radius: 1.0 });
        assert!(matches!(ZeroMeasure::new(kind, 1.5), Err(Error::DensityBound { .. })));
        assert!(ZeroMeasure::new(kind, 2.0).is_ok());
        assert!(ZeroMeasure::new(MeasureKind::Uniform, 0.5).is_err());
        assert!(ZeroMeasure::tilted([0.0, 0.0, 1.0], 1.5).is_err());
    }

    #[test]
    fn disk_masses() {
        let u = ZeroMeasure::uniform();
        // The unit chart disk is a hemisphere.
        assert_abs_diff_eq!(u.chart_disk_mass(Complex64::new(0.0, 0.0), 1.0).unwrap(), 0.5, epsilon = 1e-10);
        // Geodesic ball: quadrature route against sin²(R/2).
        let (c, r) = geodesic_ball_in_chart(Complex64::new(0.6, 0.8), 0.3).unwrap();
        assert_abs_diff_eq!(u.chart_disk_mass(c, r).unwrap(), uniform_ball_mass(0.3), epsilon = 1e-10);
        let g = ZeroMeasure::gaussian_at_omega();
        assert_abs_diff_eq!(
            g.chart_disk_mass(Complex64::new(0.0, 0.0), 1.0).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-10
        );
    }

    /// Empirical masses of test disks against the quadrature of the density.
    #[test]
    fn sampler_matches_density() {
        let disks = [
            (Complex64::new(0.0, 0.0), 0.5),
            (Complex64::new(1.0, 0.0), 0.3),
            (Complex64::new(-0.5, 0.8), 0.4),
            (Complex64::new(0.2, -1.5), 1.0),
            (Complex64::new(3.0, 3.0), 2.0),
            (Complex64::new(0.0, 0.9), 0.2),
            (Complex64::new(-2.0, 0.0), 0.7),
            (Complex64::new(0.1, 0.1), 0.05),
        ];
        let measures = [
            ZeroMeasure::uniform(),
            ZeroMeasure::gaussian_at_omega(),
            ZeroMeasure::cap(1.0).unwrap(),
            ZeroMeasure::tilted([0.6, 0.0, 0.8], 0.7).unwrap(),
        ];
        let n = 40_000;
        for m in measures {
            let zs = m.sample_zeros(n, &mut rng());
            for (c, r) in disks {
                let p = m.chart_disk_mass(c, r).unwrap();
                let hits = zs.iter().filter(|w| (**w - c).norm() <= r).count() as f64;
                let se = (p * (1.0 - p) / n as f64).sqrt().max(1e-12);
                let z = (hits / n as f64 - p) / se;
                assert!(z.abs() < 4.0, "{} disk {c} r {r}: p={p} emp={} z={z}", m.id(), hits / n as f64);
            }
        }
    }
}

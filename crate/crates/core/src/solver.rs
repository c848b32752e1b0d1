//! Critical points of `p` as zeros of the field.
//!
//! With `q(w) = ∏(w − z_k)`, the finite critical points are the roots of
//! `r(w) = w·q′(w) − N·q(w) = q(w)·g(w)` where `g(w) = w·S(w) − N` and
//! `S = q′/q = Σ 1/(w − z_k)`. Since `w/(w − z) = 1 + z/(w − z)`, `g` is
//! evaluated without cancellation as `Σ z_k/(w − z_k)`. The Newton ratio of
//! `r` is then `1/(S + g′/g)`, so simultaneous iteration runs on `r`
//! without ever expanding a coefficient.
//!
//! Expanding `g` at infinity gives `g(w) = Σ_m P_m/w^m` with power sums
//! `P_m = Σ z_k^m`, so `r = q·g` has degree `N − m₀` where `m₀` is the
//! first nonvanishing power sum. Each lost degree is a critical point
//! absorbed at `0̲`. The power sums are tested relative to `Σ|z_k|^m`;
//! approximants that still run off to infinity are harvested as well.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{expected_field, ConditionedSample, POLE_TOLERANCE};
use crate::measures::ZeroMeasure;
use crate::sphere::{geodesic_distance, ChartPoint, Contour};
use crate::summation::ComplexCompensatedSum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub points: Vec<Complex64>,
    pub degree_drop: usize,
    /// `|E_N(point)|` for each point.
    pub residuals: Vec<f64>,
    /// All approximants settled and every residual certified.
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Relative correction size at which an approximant is frozen.
    pub tol: f64,
    pub max_iters: usize,
    /// Approximants beyond this modulus are harvested at `0̲`.
    pub escape_radius: f64,
    /// Certification threshold relative to the local scale
    /// `Σ 1/|w − z_k| + N/|w|`.
    pub residual_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-12,
            max_iters: 200,
            escape_radius: 1e9,
            residual_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Approximant {
    Active,
    Settled,
    Escaped,
}

/// `r′/r` at `w`.
fn log_derivative_r(zeros: &[Complex64], w: Complex64) -> Complex64 {
    let mut s = ComplexCompensatedSum::new();
    let mut g = ComplexCompensatedSum::new();
    let mut dg = ComplexCompensatedSum::new();
    for z in zeros {
        let inv = (w - z).inv();
        let zi = z * inv;
        s.add(inv);
        g.add(zi);
        dg.add(-zi * inv);
    }
    s.value() + dg.value() / g.value()
}

fn check_generic(zeros: &[Complex64]) -> Result<()> {
    if let Some(z) = zeros.iter().find(|z| z.norm() < POLE_TOLERANCE) {
        return Err(Error::InvalidInput(format!("zero {z} sits on the pole w = 0")));
    }
    for (i, a) in zeros.iter().enumerate() {
        for b in &zeros[i + 1..] {
            if (a - b).norm() < POLE_TOLERANCE {
                return Err(Error::InvalidInput(format!("coincident zeros near {a}")));
            }
        }
    }
    Ok(())
}

/// Number of leading power sums of the zeros that cancel, i.e. how far the
/// degree of `r` falls below `N − 1`.
fn cancelled_power_sums(zeros: &[Complex64]) -> usize {
    const CANCELLATION: f64 = 1e-10;
    let scale = zeros.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let units: Vec<Complex64> = zeros.iter().map(|z| z / scale).collect();
    let mut powers = units.clone();
    for m in 1..zeros.len() {
        let mut sum = ComplexCompensatedSum::new();
        let mut size = 0.0;
        for u in &powers {
            sum.add(*u);
            size += u.norm();
        }
        if sum.value().norm() > CANCELLATION * size {
            return m - 1;
        }
        for (p, u) in powers.iter_mut().zip(&units) {
            *p *= u;
        }
    }
    zeros.len() - 1
}

/// Starting points next to each zero: `z_k − 1/G_k` where `G_k` is the
/// field of everything else at `z_k`. This is the empirical version of the
/// paired-point prediction. Only the `count` strongest pairings are kept.
fn paired_guesses(zeros: &[Complex64], count: usize) -> Vec<Complex64> {
    let n = zeros.len() as f64;
    let mut guesses: Vec<(f64, Complex64)> = zeros
        .iter()
        .enumerate()
        .map(|(k, zk)| {
            let mut acc = ComplexCompensatedSum::new();
            acc.add(-n / zk);
            for (j, zj) in zeros.iter().enumerate() {
                if j != k {
                    acc.add((zk - zj).inv());
                }
            }
            let step = -acc.value().inv();
            ((step.norm() / zk.norm()), zk + step)
        })
        .collect();
    // Stable sort keeps the canonical order among equally strong pairings.
    guesses.sort_by(|a, b| a.0.total_cmp(&b.0));
    guesses.truncate(count);
    guesses.into_iter().map(|(_, g)| g).collect()
}

fn usable(guesses: &[Complex64], zeros: &[Complex64]) -> bool {
    let scale = zeros.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sep = 1e-10 * scale.max(1.0);
    guesses.iter().all(|g| g.re.is_finite() && g.im.is_finite() && g.norm() > POLE_TOLERANCE)
        && guesses.iter().all(|g| zeros.iter().all(|z| (g - z).norm() > sep))
        && guesses
            .iter()
            .enumerate()
            .all(|(i, a)| guesses[i + 1..].iter().all(|b| (a - b).norm() > sep))
}

fn circle_guesses(zeros: &[Complex64], count: usize) -> Vec<Complex64> {
    let radius = 2.0 * zeros.iter().map(|z| z.norm()).fold(0.0, f64::max).sqrt();
    (0..count)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / count as f64 + 0.4))
        .collect()
}

/// All finite critical points, by Aberth–Ehrlich iteration on `r`.
pub fn all_critical_points(sample: &ConditionedSample, tol: f64) -> Result<CriticalSet> {
    all_critical_points_with(
        sample,
        SolverOptions {
            tol,
            ..SolverOptions::default()
        },
    )
}

pub fn all_critical_points_with(sample: &ConditionedSample, options: SolverOptions) -> Result<CriticalSet> {
    let zeros = sample.zeros();
    check_generic(zeros)?;
    let degree = sample.degree();
    let cancelled = cancelled_power_sums(zeros);
    let count = degree - 1 - cancelled;

    let mut approx = paired_guesses(zeros, count);
    if !usable(&approx, zeros) {
        approx = circle_guesses(zeros, count);
    }
    let mut state = vec![Approximant::Active; count];
    let mut iterations = 0;

    while iterations < options.max_iters && state.contains(&Approximant::Active) {
        iterations += 1;
        let snapshot = approx.clone();
        for i in 0..count {
            if state[i] != Approximant::Active {
                continue;
            }
            let w = snapshot[i];
            let mut repulsion = ComplexCompensatedSum::new();
            for (j, other) in snapshot.iter().enumerate() {
                if j != i && state[j] != Approximant::Escaped {
                    repulsion.add((w - other).inv());
                }
            }
            let ld = log_derivative_r(zeros, w);
            if !(ld.re.is_finite() && ld.im.is_finite()) {
                // r(w) vanished exactly.
                state[i] = Approximant::Settled;
                continue;
            }
            let correction = (ld - repulsion.value()).inv();
            let next = w - correction;
            if !(next.re.is_finite() && next.im.is_finite()) || next.norm() > options.escape_radius {
                state[i] = Approximant::Escaped;
                continue;
            }
            approx[i] = next;
            if correction.norm() <= options.tol * w.norm() {
                state[i] = Approximant::Settled;
            }
        }
    }

    let mut points: Vec<Complex64> = approx
        .iter()
        .zip(&state)
        .filter(|(_, s)| **s != Approximant::Escaped)
        .map(|(w, _)| *w)
        .collect();
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let degree_drop = degree - 1 - points.len();

    let mut certified = true;
    let residuals: Vec<f64> = points
        .iter()
        .map(|w| {
            let residual = sample.field_unchecked(*w).norm();
            let scale = zeros.iter().map(|z| (w - z).norm().recip()).sum::<f64>() + degree as f64 / w.norm();
            if !(residual <= options.residual_tol * scale) {
                certified = false;
            }
            residual
        })
        .collect();

    Ok(CriticalSet {
        points,
        degree_drop,
        residuals,
        converged: certified && !state.contains(&Approximant::Active),
        iterations,
    })
}

/// Zeros of the field inside a contour, counted with the argument
/// principle: the result is `#critical points − #zeros of p` inside (minus
/// one more if the contour encloses the pole at `w = 0`).
///
/// The contour is walked through its samples; any step whose argument
/// increment reaches `π/2` is bisected until it does not.
pub fn winding_count(sample: &ConditionedSample, contour: &Contour) -> Result<i64> {
    const GUARD: f64 = 1e-9;
    const MAX_DEPTH: u32 = 30;
    const MAX_EVALUATIONS: usize = 1 << 16;

    let nearest = sample
        .zeros()
        .iter()
        .map(|z| contour.distance_to(*z))
        .fold(contour.distance_to(Complex64::new(0.0, 0.0)), f64::min);
    if nearest < GUARD {
        return Err(Error::Indeterminate(format!(
            "a zero or the pole lies {nearest:e} from the contour"
        )));
    }

    let mut evaluations = 0usize;
    let mut eval = |theta: f64| -> Result<Complex64> {
        evaluations += 1;
        if evaluations > MAX_EVALUATIONS {
            return Err(Error::Indeterminate("evaluation budget exhausted".into()));
        }
        let f = sample.field_unchecked(contour.point_at(theta));
        if f.re.is_finite() && f.im.is_finite() && f.norm() > 0.0 {
            Ok(f)
        } else {
            Err(Error::Indeterminate(format!("field vanishes or blows up at angle {theta}")))
        }
    };

    fn increment(
        eval: &mut dyn FnMut(f64) -> Result<Complex64>,
        a: f64,
        fa: Complex64,
        b: f64,
        fb: Complex64,
        depth: u32,
    ) -> Result<f64> {
        let step = (fb * fa.conj()).arg();
        if step.abs() < 0.5 * PI {
            return Ok(step);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Indeterminate(format!(
                "argument jumps by {step:.3} on an unresolvably short arc near angle {a}"
            )));
        }
        let mid = 0.5 * (a + b);
        let fm = eval(mid)?;
        Ok(increment(eval, a, fa, mid, fm, depth + 1)? + increment(eval, mid, fm, b, fb, depth + 1)?)
    }

    let m = contour.sample_count;
    let f0 = eval(0.0)?;
    let mut total = 0.0;
    let mut prev = (0.0, f0);
    for k in 1..=m {
        let theta = contour.angle(k);
        let f = if k == m { f0 } else { eval(theta)? };
        total += increment(&mut eval, prev.0, prev.1, theta, f, 0)?;
        prev = (theta, f);
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(Error::Indeterminate(format!("non-integer winding {turns}")));
    }
    Ok(rounded as i64)
}

/// Critical points inside a contour: the winding count corrected by the
/// known zeros (and the pole) inside.
pub fn critical_count_inside(sample: &ConditionedSample, contour: &Contour) -> Result<i64> {
    let winding = winding_count(sample, contour)?;
    let zeros_inside = sample.zeros().iter().filter(|z| contour.encloses(**z)).count() as i64;
    let pole_inside = contour.encloses(Complex64::new(0.0, 0.0)) as i64;
    Ok(winding + zeros_inside + pole_inside)
}

/// Newton polish of a critical point: `w ← w − E_N(w)/E_N′(w)`.
pub fn local_refine(sample: &ConditionedSample, start: Complex64, tol: f64) -> Result<Complex64> {
    const MAX_ITERS: usize = 50;
    let newton_step = |w: Complex64| -> Result<Complex64> { Ok(sample.field(w)? / sample.field_derivative(w)?) };
    let mut step = newton_step(start)?;
    if !(step.re.is_finite() && step.im.is_finite()) {
        return Err(Error::Divergence(format!("degenerate Newton step at {start}")));
    }
    let leash = 10.0 * step.norm();
    let mut w = start;
    for _ in 0..MAX_ITERS {
        if step.norm() <= tol * w.norm() {
            return Ok(w - step);
        }
        w -= step;
        if (w - start).norm() > leash {
            return Err(Error::Divergence(format!("Newton left the disk of radius {leash:e} around {start}")));
        }
        step = newton_step(w)?;
    }
    Err(Error::Divergence(format!("Newton did not settle in {MAX_ITERS} iterations from {start}")))
}

/// Empirical versions of the two contour conditions: the averaged field
/// stays of order `N` on the contour, and the contour stays within
/// `O(1/N)` of `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourCheck {
    /// `(1/N)·min |E[E_N]|` over the contour samples.
    pub c1_hat: f64,
    /// `N·max d(w, ξ)` over the contour samples.
    pub c2_hat: f64,
    pub ok: bool,
    /// `ξ` is closer to the contour than the sample spacing.
    pub risky: bool,
}

pub const MIN_C1: f64 = 1e-3;

pub fn verify_contour_conditions(
    measure: &ZeroMeasure,
    pinned: &[Complex64],
    degree: usize,
    xi: ChartPoint,
    contour: &Contour,
) -> Result<ContourCheck> {
    let xi = xi
        .finite()
        .ok_or_else(|| Error::InvalidInput("contour conditions need a finite ξ".into()))?;
    let n = degree as f64;
    let mut min_field = f64::INFINITY;
    let mut max_dist: f64 = 0.0;
    let mut hit_pole = false;
    for w in contour.samples() {
        match expected_field(measure, pinned, degree, w) {
            Ok(e) => min_field = min_field.min(e.norm()),
            Err(Error::Pole(_)) => hit_pole = true,
            Err(e) => return Err(e),
        }
        max_dist = max_dist.max(geodesic_distance(w.into(), xi.into()));
    }
    let gap = contour.distance_to(xi);
    let c1_hat = min_field / n;
    Ok(ContourCheck {
        c1_hat,
        c2_hat: n * max_dist,
        ok: !hit_pole && c1_hat > MIN_C1 && gap > 1e-9 * xi.norm().max(1.0),
        risky: gap < contour.sample_spacing(),
    })
}

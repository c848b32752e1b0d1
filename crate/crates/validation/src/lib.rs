//! Independent oracles for checking the field-based solver.
//!
//! Critical points are recomputed the textbook way: expand
//! `r(w) = w·q′(w) − N·q(w)` into coefficients in double-double
//! arithmetic, take companion-matrix eigenvalues, and polish each with
//! Newton steps evaluated in double-double. None of this shares code with
//! the solver.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;

    fn sub(self, o: Dd) -> Dd {
        self + -o
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn from_c64(z: Complex64) -> Cdd {
        Cdd {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }

    pub fn real(x: f64) -> Cdd {
        Cdd {
            re: Dd::new(x),
            im: Dd::new(0.0),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for Cdd {
    type Output = Cdd;

    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;

    fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;

    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Coefficients of `∏(w − z_k)`, lowest degree first.
pub fn expand(zeros: &[Complex64]) -> Vec<Cdd> {
    let mut c = vec![Cdd::real(1.0)];
    for z in zeros {
        let mz = Cdd::from_c64(-z);
        let mut next = vec![Cdd::default(); c.len() + 1];
        for (j, cj) in c.iter().enumerate() {
            next[j + 1] = next[j + 1] + *cj;
            next[j] = next[j] + *cj * mz;
        }
        c = next;
    }
    c
}

/// Coefficients of `r = w·q′ − N·q`, lowest degree first (length `N + 1`,
/// the top one identically zero).
pub fn critical_coefficients(zeros: &[Complex64]) -> Vec<Cdd> {
    let n = zeros.len() as f64;
    expand(zeros)
        .into_iter()
        .enumerate()
        .map(|(j, c)| c * Cdd::real(j as f64 - n))
        .collect()
}

/// Value and derivative of `Σ c_j w^j` by Horner's rule in double-double.
pub fn horner(coefficients: &[Cdd], w: Complex64) -> (Complex64, Complex64) {
    let x = Cdd::from_c64(w);
    let mut p = Cdd::default();
    let mut dp = Cdd::default();
    for c in coefficients.iter().rev() {
        dp = dp * x + p;
        p = p * x + *c;
    }
    (p.to_c64(), dp.to_c64())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRoots {
    pub roots: Vec<Complex64>,
    pub degree_drop: usize,
}

/// Critical points of `p(w) = w^{−N}∏(w − z_k)` from the expanded
/// coefficients of `r`.
pub fn critical_points_by_coefficients(zeros: &[Complex64]) -> OracleRoots {
    let n = zeros.len();
    let r = critical_coefficients(zeros);
    // Coefficient sizes of ∏(w + |z_k|) bound every cancellation.
    let mut bound = vec![1.0f64];
    for z in zeros {
        let m = z.norm();
        let mut next = vec![0.0; bound.len() + 1];
        for (j, b) in bound.iter().enumerate() {
            next[j + 1] += b;
            next[j] += b * m;
        }
        bound = next;
    }
    let degree = (0..n)
        .rev()
        .find(|&j| r[j].to_c64().norm() > 1e-12 * (n - j) as f64 * bound[j])
        .unwrap_or(0);
    let drop = n - 1 - degree;
    if degree == 0 {
        return OracleRoots {
            roots: Vec::new(),
            degree_drop: drop,
        };
    }

    let lead = r[degree].to_c64();
    let monic: Vec<Complex64> = r[..degree].iter().map(|c| c.to_c64() / lead).collect();
    // Rescale to roots of unit geometric mean before forming the
    // companion matrix.
    let s = monic[0].norm().powf(1.0 / degree as f64).max(f64::MIN_POSITIVE);
    let scaled: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .map(|(j, a)| a / s.powi((degree - j) as i32))
        .collect();
    let companion = DMatrix::<Complex64>::from_fn(degree, degree, |i, j| {
        if j == degree - 1 {
            -scaled[i]
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = companion
        .schur()
        .eigenvalues()
        .expect("complex Schur form always yields eigenvalues");
    let roots = eig.iter().map(|l| polish(&r[..=degree], l * s)).collect();
    OracleRoots {
        roots,
        degree_drop: drop,
    }
}

fn polish(coefficients: &[Cdd], start: Complex64) -> Complex64 {
    let mut w = start;
    let mut last = f64::INFINITY;
    for _ in 0..60 {
        let (p, dp) = horner(coefficients, w);
        let step = p / dp;
        if !(step.re.is_finite() && step.im.is_finite()) || step.norm() >= last {
            break;
        }
        w -= step;
        last = step.norm();
        if last <= 1e-17 * w.norm() {
            break;
        }
    }
    w
}

/// Bottleneck distance of a greedy bijection between two point sets
/// (closest pairs first). `None` when the sizes differ.
pub fn matched_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, x)| b.iter().enumerate().map(move |(j, y)| ((x - y).norm(), i, j)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (mut used_a, mut used_b) = (vec![false; a.len()], vec![false; b.len()]);
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    Some(worst)
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull, counter-clockwise, by Andrew's monotone chain.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for &x in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], x) <= 0.0 {
                hull.pop();
            }
            hull.push(x);
        }
        hull.pop();
    }
    hull
}

fn segment_distance(x: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (x - a).norm();
    }
    let t = (((x - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (x - (a + ab * t)).norm()
}

/// Euclidean distance from `x` to the hull (zero inside).
pub fn distance_to_hull(x: Complex64, hull: &[Complex64]) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (x - hull[0]).norm(),
        2 => segment_distance(x, hull[0], hull[1]),
        m => {
            let inside = (0..m).all(|i| cross(hull[i], hull[(i + 1) % m], x) >= 0.0);
            if inside {
                0.0
            } else {
                (0..m)
                    .map(|i| segment_distance(x, hull[i], hull[(i + 1) % m]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

#[cfg(test)]
mod solver_agreement;

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn double_double_keeps_the_low_word() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        assert_eq!(a.hi, 1.0);
        assert_eq!(a.lo, 1e-20);
        let third = Dd::new(1.0 / 3.0);
        let prod = third * Dd::new(3.0) - Dd::new(1.0);
        assert!(prod.to_f64().abs() < 1e-16);
    }

    #[test]
    fn expansion_of_known_polynomial() {
        // (w − 1)(w + 1)(w − i) = w³ − i w² − w + i
        let coeffs: Vec<Complex64> = expand(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)]).iter().map(|x| x.to_c64()).collect();
        assert_eq!(coeffs, vec![c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)]);
    }

    #[test]
    fn oracle_small_cases() {
        let two = critical_points_by_coefficients(&[c(1.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(two.degree_drop, 0);
        assert!((two.roots[0] - c(1.0, 1.0)).norm() < 1e-15);
        let pair = critical_points_by_coefficients(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(pair.degree_drop, 1);
        assert!(pair.roots.is_empty());
    }

    #[test]
    fn hull_distance() {
        let hull = convex_hull(&[c(0.0, 0.0), c(2.0, 0.0), c(2.0, 2.0), c(0.0, 2.0), c(1.0, 1.0)]);
        assert_eq!(hull.len(), 4);
        assert_eq!(distance_to_hull(c(1.0, 1.0), &hull), 0.0);
        assert!((distance_to_hull(c(3.0, 1.0), &hull) - 1.0).abs() < 1e-15);
        let segment = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((distance_to_hull(c(0.5, 0.5), &segment) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matching() {
        let a = [c(0.0, 0.0), c(1.0, 0.0)];
        let b = [c(1.0, 1e-9), c(0.0, 0.0)];
        assert!((matched_distance(&a, &b).unwrap() - 1e-9).abs() < 1e-20);
        assert_eq!(matched_distance(&a, &b[..1]), None);
    }
}

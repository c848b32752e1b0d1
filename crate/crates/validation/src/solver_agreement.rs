//! The field-based solver against the coefficient oracle.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use critpair::solver::{all_critical_points, critical_count_inside};
use critpair::sphere::Contour;
use critpair::{ConditionedSample, ZeroMeasure};
use super::{critical_points_by_coefficients, matched_distance};

fn point() -> impl Strategy<Value = Complex64> {
    (0.2f64..4.0, -3.2f64..3.2).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn separated(zeros: &[Complex64]) -> bool {
    zeros
        .iter()
        .enumerate()
        .all(|(i, a)| zeros[i + 1..].iter().all(|b| (a - b).norm() > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_companion_oracle(zeros in prop::collection::vec(point(), 2..16)) {
        prop_assume!(separated(&zeros));
        let sample = ConditionedSample::new(vec![zeros[0]], zeros[1..].to_vec(), "prop").unwrap();
        let set = all_critical_points(&sample, 1e-12).unwrap();
        let oracle = critical_points_by_coefficients(sample.zeros());
        prop_assert_eq!(set.degree_drop, oracle.degree_drop);
        let scaled = |w: &Complex64| w / w.norm().max(1.0);
        let a: Vec<Complex64> = set.points.iter().map(scaled).collect();
        let b: Vec<Complex64> = oracle.roots.iter().map(scaled).collect();
        let d = matched_distance(&a, &b).unwrap();
        prop_assert!(d <= 1e-8, "matched distance {d:e}");
    }
}

#[test]
fn winding_agrees_with_solver_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mu = ZeroMeasure::uniform();
    let mut checked = 0;
    for _ in 0..400 {
        let n = rng.random_range(3..=20);
        let xi = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let Ok(sample) = ConditionedSample::draw(&mu, vec![xi], n, &mut rng) else { continue };
        let set = all_critical_points(&sample, 1e-12).unwrap();
        let center = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let radius = rng.random_range(0.1..1.5);
        let contour = Contour::new(center, radius, 256).unwrap();
        let clearance = set
            .points
            .iter()
            .chain(sample.zeros())
            .chain(std::iter::once(&Complex64::new(0.0, 0.0)))
            .map(|w| ((w - center).norm() - radius).abs())
            .fold(f64::INFINITY, f64::min);
        if clearance < 1e-3 {
            continue;
        }
        let inside = set.points.iter().filter(|w| contour.encloses(**w)).count() as i64;
        assert_eq!(critical_count_inside(&sample, &contour).unwrap(), inside, "N = {n}, center {center}, radius {radius}");
        checked += 1;
        if checked == 200 {
            break;
        }
    }
    assert_eq!(checked, 200);
}

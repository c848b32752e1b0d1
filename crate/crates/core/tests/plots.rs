use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use critpair::experiment::{render_sample_svg, PlotData};
use critpair::pairing::predict;
use critpair::solver::all_critical_points;
use critpair::{ChartPoint, ConditionedSample, ZeroMeasure};

fn count_class(doc: &roxmltree::Document, class: &str) -> usize {
    doc.descendants().filter(|n| n.attribute("class") == Some(class)).count()
}

fn legend(doc: &roxmltree::Document) -> String {
    doc.descendants()
        .find(|n| n.attribute("class") == Some("legend"))
        .and_then(|n| n.text())
        .unwrap()
        .to_string()
}

#[test]
fn roots_of_unity_plot_reports_the_drop() {
    let zeros: Vec<Complex64> = (0..9).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 9.0)).collect();
    let sample = ConditionedSample::new(vec![zeros[0]], zeros[1..].to_vec(), "roots").unwrap();
    let set = all_critical_points(&sample, 1e-12).unwrap();
    let svg = render_sample_svg(&PlotData {
        title: "z^9 = 1".into(),
        zeros: sample.random_zeros().to_vec(),
        pinned: sample.pinned().to_vec(),
        critical: set.points,
        degree_drop: set.degree_drop,
        ..PlotData::default()
    });
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(count_class(&doc, "zero") + count_class(&doc, "zero pinned"), 9);
    assert_eq!(count_class(&doc, "critical"), 0);
    assert!(legend(&doc).contains("degree_drop = 8"), "{}", legend(&doc));
}

#[test]
fn sample_plot_accounts_for_every_point() {
    let mu = ZeroMeasure::uniform();
    let xi = Complex64::new(1.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let sample = ConditionedSample::draw(&mu, vec![xi], 30, &mut rng).unwrap();
    let set = all_critical_points(&sample, 1e-12).unwrap();
    let prediction = predict(&mu, ChartPoint::Finite(xi), 30, 0.5).unwrap();
    let svg = render_sample_svg(&PlotData {
        title: "N = 30".into(),
        zeros: sample.random_zeros().to_vec(),
        pinned: sample.pinned().to_vec(),
        critical: set.points.clone(),
        degree_drop: set.degree_drop,
        predictions: vec![prediction.w_exact],
        contours: vec![prediction.contour],
    });
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let shown = count_class(&doc, "zero") + count_class(&doc, "zero pinned") + count_class(&doc, "critical");
    let hidden: usize = legend(&doc).rsplit(": ").next().unwrap().parse().unwrap();
    assert_eq!(shown + hidden, 30 + set.points.len());
    assert_eq!(count_class(&doc, "zero pinned"), 1);
    assert_eq!(count_class(&doc, "prediction"), 1);
    assert_eq!(count_class(&doc, "contour"), 1);
    for node in doc.descendants().filter(|n| n.attribute("class") == Some("critical")) {
        let w = Complex64::new(
            node.attribute("data-re").unwrap().parse().unwrap(),
            node.attribute("data-im").unwrap().parse().unwrap(),
        );
        assert!(set.points.contains(&w));
    }
}

//! Sweeps over `N`: trials in parallel, ordered aggregation, persistence.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Layout};
use super::fit::{fit_exponent, FitResult, RateRow};
use crate::error::{Error, Result};
use crate::field::ConditionedSample;
use crate::measures::ZeroMeasure;
use crate::pairing::{
    generate_well_spaced, predict_with_margin, run_multi_trial, run_single_trial, trial_rng, MultiContext, MultiOutcome,
    PairingPrediction, TrialOutcome,
};
use crate::sphere::ChartPoint;

pub const PAIR_TRIALS: &str = "pair_trials.jsonl";
pub const PAIR_CSV: &str = "pair_summary.csv";
pub const PAIR_JSON: &str = "pair_summary.json";
pub const MULTI_TRIALS: &str = "multi_trials.jsonl";
pub const MULTI_CSV: &str = "multi_summary.csv";
pub const MULTI_JSON: &str = "multi_summary.json";
pub const LEMMA_TRIALS: &str = "lemma_trials.jsonl";
pub const LEMMA_CSV: &str = "lemma_summary.csv";
pub const LEMMA_JSON: &str = "lemma_summary.json";

/// Runs `f` on a pool of `threads` workers (`0`: rayon's default).
pub fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn parallel_trials<T: Send>(trials: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..trials as u64).into_par_iter().map(f).collect()
}

pub fn median(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

fn binomial_se(p: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

fn fraction(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

fn fit_rows(rows: Vec<RateRow>, config: &ExperimentConfig) -> Result<Option<FitResult>> {
    if rows.len() < 3 {
        return Ok(None);
    }
    fit_exponent(&rows, config.bootstrap_resamples, config.seed).map(Some)
}

// ---------------------------------------------------------------- pairing

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub paired: usize,
    pub paired_frac: f64,
    pub paired_se: f64,
    pub indeterminate: usize,
    pub indeterminate_frac: f64,
    /// Determinate failures with no critical point inside.
    pub none_inside: usize,
    /// Determinate failures with two or more inside.
    pub several_inside: usize,
    /// Failure rate among determinate trials.
    pub failure_rate: f64,
    pub failure_se: f64,
    /// Paired trials whose Newton polish did not land inside the contour.
    pub unrefined: usize,
    #[serde(rename = "median_Ndist")]
    pub median_n_dist: Option<f64>,
    #[serde(rename = "median_Nargerr")]
    pub median_n_argerr: Option<f64>,
    #[serde(rename = "median_N2offset")]
    pub median_n2_offset: Option<f64>,
    pub r: f64,
    pub measure: String,
    pub xi: String,
}

/// The CSV view of a [`PairRow`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCsvRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub paired_frac: f64,
    pub indeterminate_frac: f64,
    #[serde(rename = "median_Ndist")]
    pub median_n_dist: Option<f64>,
    #[serde(rename = "median_Nargerr")]
    pub median_n_argerr: Option<f64>,
    pub r: f64,
    pub measure: String,
    pub xi: String,
}

impl From<&PairRow> for PairCsvRow {
    fn from(row: &PairRow) -> Self {
        PairCsvRow {
            n: row.n,
            trials: row.trials,
            paired_frac: row.paired_frac,
            indeterminate_frac: row.indeterminate_frac,
            median_n_dist: row.median_n_dist,
            median_n_argerr: row.median_n_argerr,
            r: row.r,
            measure: row.measure.clone(),
            xi: row.xi.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub rows: Vec<PairRow>,
    pub failure_fit: Option<FitResult>,
    pub indeterminate_frac: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSweep {
    pub predictions: Vec<PairingPrediction>,
    pub trials: Vec<TrialOutcome>,
    pub summary: PairSummary,
}

fn group_by_n<T>(items: &[T], n_of: impl Fn(&T) -> usize) -> Vec<(usize, Vec<&T>)> {
    let mut groups: Vec<(usize, Vec<&T>)> = Vec::new();
    for item in items {
        let n = n_of(item);
        match groups.iter_mut().find(|(m, _)| *m == n) {
            Some((_, g)) => g.push(item),
            None => groups.push((n, vec![item])),
        }
    }
    groups
}

pub fn pair_row(n: usize, trials: &[&TrialOutcome], r: f64, measure: &str, xi: Complex64) -> PairRow {
    let total = trials.len();
    let paired = trials.iter().filter(|t| t.paired).count();
    let indeterminate = trials.iter().filter(|t| t.indeterminate).count();
    let determinate = total - indeterminate;
    let none_inside = trials.iter().filter(|t| t.count_inside.is_some_and(|c| c <= 0)).count();
    let several_inside = trials.iter().filter(|t| t.count_inside.is_some_and(|c| c >= 2)).count();
    let failure_rate = fraction(determinate - paired, determinate);
    let nf = n as f64;
    let scaled = |f: fn(&TrialOutcome) -> Option<f64>, scale: f64| median(trials.iter().filter_map(|t| f(t)).map(|v| v * scale).collect());
    PairRow {
        n,
        trials: total,
        paired,
        paired_frac: fraction(paired, total),
        paired_se: binomial_se(fraction(paired, total), total),
        indeterminate,
        indeterminate_frac: fraction(indeterminate, total),
        none_inside,
        several_inside,
        failure_rate,
        failure_se: binomial_se(failure_rate, determinate),
        unrefined: trials.iter().filter(|t| t.paired && t.paired_point.is_none()).count(),
        median_n_dist: scaled(|t| t.distance_to_xi, nf),
        median_n_argerr: scaled(|t| t.arg_error.map(f64::abs), nf),
        median_n2_offset: scaled(|t| t.offset, nf * nf),
        r,
        measure: measure.to_string(),
        xi: xi.to_string(),
    }
}

/// Re-aggregates trial records; rows come out in order of first
/// appearance of each `N`.
pub fn summarize_pairs(trials: &[TrialOutcome], config: &ExperimentConfig) -> Result<PairSummary> {
    let measure = config.measure.to_string();
    let rows: Vec<PairRow> = group_by_n(trials, |t| t.degree)
        .into_iter()
        .map(|(n, g)| pair_row(n, &g, config.r, &measure, g[0].xi))
        .collect();
    let rates = rows
        .iter()
        .map(|r| RateRow::binomial(r.n, r.trials - r.indeterminate - r.paired, r.trials - r.indeterminate))
        .collect();
    let indeterminate = rows.iter().map(|r| r.indeterminate).sum();
    Ok(PairSummary {
        failure_fit: fit_rows(rates, config)?,
        indeterminate_frac: fraction(indeterminate, trials.len()),
        rows,
    })
}

/// Single-zero pairing trials at every `N` of the config.
pub fn run_pair_sweep(config: &ExperimentConfig) -> Result<PairSweep> {
    config.validate_for_sweep()?;
    let mu = config.measure.build()?;
    let xi = ChartPoint::Finite(config.xi());
    let mut predictions = Vec::new();
    let mut trials = Vec::new();
    for &n in &config.n_list {
        let prediction = predict_with_margin(&mu, xi, n, config.r, config.margin)?;
        let batch = with_pool(config.threads, || {
            parallel_trials(config.trials_per_n, |t| run_single_trial(&mu, &prediction, config.seed, t))
        })??;
        predictions.push(prediction);
        trials.extend(batch);
    }
    let summary = summarize_pairs(&trials, config)?;
    Ok(PairSweep {
        predictions,
        trials,
        summary,
    })
}

pub fn write_pair_outputs(dir: &Path, sweep: &PairSweep) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_jsonl(&dir.join(PAIR_TRIALS), &sweep.trials)?;
    write_csv(&dir.join(PAIR_CSV), sweep.summary.rows.iter().map(PairCsvRow::from))?;
    write_json(&dir.join(PAIR_JSON), &sweep.summary)
}

// ------------------------------------------------------------ multi-zero

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub trial_index: u64,
    #[serde(flatten)]
    pub outcome: MultiOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub count: usize,
    pub trials: usize,
    pub all_paired_frac: f64,
    pub all_paired_se: f64,
    pub indeterminate_frac: f64,
    /// Failure rate per pinned zero over determinate contours.
    pub per_xi_failure_rate: f64,
    pub per_xi_failure_se: f64,
    pub r: f64,
    pub epsilon: f64,
    pub measure: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSummary {
    pub rows: Vec<MultiRow>,
    pub indeterminate_frac: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSweep {
    pub contexts: Vec<MultiContext>,
    pub records: Vec<MultiRecord>,
    pub summary: MultiSummary,
}

/// Pinned zeros for a multi run at degree `n`.
pub fn multi_layout(config: &ExperimentConfig, mu: &ZeroMeasure, n: usize) -> Result<Vec<ChartPoint>> {
    let count = config.multi_count(n);
    match config.layout {
        Layout::Circle => Ok((0..count)
            .map(|k| ChartPoint::Finite(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / count as f64)))
            .collect()),
        Layout::Random => {
            let mut rng = trial_rng(config.seed, n, u64::MAX);
            generate_well_spaced(mu, count, n, config.epsilon, config.margin, &mut rng)
        }
    }
}

pub fn summarize_multi(records: &[MultiRecord], config: &ExperimentConfig) -> MultiSummary {
    let rows: Vec<MultiRow> = group_by_n(records, |r| r.n)
        .into_iter()
        .map(|(n, g)| {
            let trials = g.len();
            let all = g.iter().filter(|r| r.outcome.all_paired).count();
            let contours: Vec<&TrialOutcome> = g.iter().flat_map(|r| &r.outcome.per_xi).collect();
            let determinate: Vec<&&TrialOutcome> = contours.iter().filter(|t| !t.indeterminate).collect();
            let failures = determinate.iter().filter(|t| !t.paired).count();
            let rate = fraction(failures, determinate.len());
            MultiRow {
                n,
                count: g[0].outcome.per_xi.len(),
                trials,
                all_paired_frac: fraction(all, trials),
                all_paired_se: binomial_se(fraction(all, trials), trials),
                indeterminate_frac: fraction(g.iter().filter(|r| r.outcome.any_indeterminate).count(), trials),
                per_xi_failure_rate: rate,
                per_xi_failure_se: binomial_se(rate, determinate.len()),
                r: config.r,
                epsilon: config.epsilon,
                measure: config.measure.to_string(),
            }
        })
        .collect();
    let indeterminate = records.iter().filter(|r| r.outcome.any_indeterminate).count();
    MultiSummary {
        rows,
        indeterminate_frac: fraction(indeterminate, records.len()),
    }
}

/// Simultaneous pairing of several pinned zeros at every `N`.
pub fn run_multi_sweep(config: &ExperimentConfig) -> Result<MultiSweep> {
    config.validate_for_sweep()?;
    let mu = config.measure.build()?;
    let mut contexts = Vec::new();
    let mut records = Vec::new();
    for &n in &config.n_list {
        let xis = multi_layout(config, &mu, n)?;
        let context = MultiContext::new(&mu, &xis, n, config.r, config.epsilon, config.margin)?;
        let batch = with_pool(config.threads, || {
            parallel_trials(config.trials_per_n, |t| {
                Ok(MultiRecord {
                    n,
                    seed: config.seed,
                    trial_index: t,
                    outcome: run_multi_trial(&mu, &context, config.seed, t)?,
                })
            })
        })??;
        contexts.push(context);
        records.extend(batch);
    }
    let summary = summarize_multi(&records, config);
    Ok(MultiSweep {
        contexts,
        records,
        summary,
    })
}

pub fn write_multi_outputs(dir: &Path, sweep: &MultiSweep) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_jsonl(&dir.join(MULTI_TRIALS), &sweep.records)?;
    write_csv(&dir.join(MULTI_CSV), sweep.summary.rows.iter())?;
    write_json(&dir.join(MULTI_JSON), &sweep.summary)
}

// ---------------------------------------------------------------- lemmas

/// Zero-count and field statistics around the predicted paired point of
/// one sample. Only the random zeros are counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub trial_index: u64,
    /// Random zeros within `N^{−1+η}` of the prediction.
    pub near_count: usize,
    /// Random zeros within `N^{−1/2+δ/2}` of the prediction.
    pub ball_count: usize,
    /// `Σ 1/|w − ξ_j|²` over random zeros at the prediction.
    pub moment_sum: f64,
    pub moment_occurred: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub near_radius: f64,
    pub near_hit_frac: f64,
    pub near_hit_se: f64,
    pub ball_radius: f64,
    pub mean_ball_count: f64,
    pub ball_count_se: f64,
    /// `(N − 1)·μ(ball)`.
    pub binomial_mean: f64,
    /// Fraction with `ball_count ≥ N^{δ+κ}`.
    pub crowded_frac: f64,
    pub moment_threshold: f64,
    pub moment_frac: f64,
    pub moment_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub rows: Vec<LemmaRow>,
    pub near_fit: Option<FitResult>,
    pub moment_fit: Option<FitResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSweep {
    pub records: Vec<LemmaRecord>,
    pub summary: LemmaSummary,
}

pub fn near_radius(n: usize, eta: f64) -> f64 {
    (n as f64).powf(-1.0 + eta)
}

pub fn ball_radius(n: usize, delta: f64) -> f64 {
    (n as f64).powf(-0.5 + 0.5 * delta)
}

pub fn summarize_lemmas(records: &[LemmaRecord], config: &ExperimentConfig, mu: &ZeroMeasure, centers: &[(usize, Complex64)]) -> Result<LemmaSummary> {
    let mut rows = Vec::new();
    for (n, g) in group_by_n(records, |r| r.n) {
        let trials = g.len();
        let center = centers
            .iter()
            .find(|(m, _)| *m == n)
            .map(|(_, c)| *c)
            .ok_or_else(|| Error::InvalidInput(format!("no prediction for N = {n}")))?;
        let radius = ball_radius(n, config.delta);
        let mass = mu.geodesic_ball_mass(ChartPoint::Finite(center), radius)?;
        let counts: Vec<f64> = g.iter().map(|r| r.ball_count as f64).collect();
        let mean = counts.iter().sum::<f64>() / trials as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0).max(1.0);
        let crowd = (n as f64).powf(config.delta + config.kappa);
        let hit = fraction(g.iter().filter(|r| r.near_count >= 1).count(), trials);
        let moment = fraction(g.iter().filter(|r| r.moment_occurred).count(), trials);
        rows.push(LemmaRow {
            n,
            trials,
            near_radius: near_radius(n, config.eta),
            near_hit_frac: hit,
            near_hit_se: binomial_se(hit, trials),
            ball_radius: radius,
            mean_ball_count: mean,
            ball_count_se: (var / trials as f64).sqrt(),
            binomial_mean: (n - 1) as f64 * mass,
            crowded_frac: fraction(g.iter().filter(|r| r.ball_count as f64 >= crowd).count(), trials),
            moment_threshold: (n as f64).powf(2.0 - 2.0 * config.eta),
            moment_frac: moment,
            moment_se: binomial_se(moment, trials),
        });
    }
    let rates = |f: fn(&LemmaRow) -> f64| -> Vec<RateRow> {
        rows.iter()
            .map(|r| RateRow::binomial(r.n, (f(r) * r.trials as f64).round() as usize, r.trials))
            .collect()
    };
    Ok(LemmaSummary {
        near_fit: fit_rows(rates(|r| r.near_hit_frac), config)?,
        moment_fit: fit_rows(rates(|r| r.moment_frac), config)?,
        rows,
    })
}

/// Statistics of the two lemmas around `w_ξ` at every `N`.
pub fn run_lemma_sweep(config: &ExperimentConfig) -> Result<LemmaSweep> {
    config.validate_for_sweep()?;
    let mu = config.measure.build()?;
    let xi = config.xi();
    let mut centers = Vec::new();
    let mut records = Vec::new();
    for &n in &config.n_list {
        let prediction = predict_with_margin(&mu, ChartPoint::Finite(xi), n, config.r, config.margin)?;
        let center = prediction.w_exact;
        let near = near_radius(n, config.eta);
        let ball = ball_radius(n, config.delta);
        let batch = with_pool(config.threads, || {
            parallel_trials(config.trials_per_n, |t| {
                let mut rng = trial_rng(config.seed, n, t);
                let sample = ConditionedSample::draw(&mu, vec![xi], n, &mut rng)?;
                let event = sample.second_moment_event(center, config.eta)?;
                Ok(LemmaRecord {
                    n,
                    seed: config.seed,
                    trial_index: t,
                    near_count: sample.count_random_zeros_in_ball(ChartPoint::Finite(center), near),
                    ball_count: sample.count_random_zeros_in_ball(ChartPoint::Finite(center), ball),
                    moment_sum: event.sum,
                    moment_occurred: event.occurred,
                })
            })
        })??;
        centers.push((n, center));
        records.extend(batch);
    }
    let summary = summarize_lemmas(&records, config, &mu, &centers)?;
    Ok(LemmaSweep { records, summary })
}

pub fn write_lemma_outputs(dir: &Path, sweep: &LemmaSweep) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_jsonl(&dir.join(LEMMA_TRIALS), &sweep.records)?;
    write_csv(&dir.join(LEMMA_CSV), sweep.summary.rows.iter())?;
    write_json(&dir.join(LEMMA_JSON), &sweep.summary)
}

// -------------------------------------------------------------------- io

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let reader = BufReader::new(File::open(path)?);
    let mut items = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            items.push(serde_json::from_str(&line)?);
        }
    }
    Ok(items)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    reader.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            n_list: vec![16, 32, 64],
            trials_per_n: 100,
            out: dir.to_path_buf(),
            bootstrap_resamples: 100,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![]), None);
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }

    #[test]
    fn pair_sweep_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config(dir.path());
        let sweep = run_pair_sweep(&config).unwrap();
        assert_eq!(sweep.trials.len(), 300);
        for row in &sweep.summary.rows {
            assert!((0.0..=1.0).contains(&row.paired_frac));
            assert!((row.paired_se - (row.paired_frac * (1.0 - row.paired_frac) / row.trials as f64).sqrt()).abs() < 1e-15);
            assert_eq!(row.paired + row.indeterminate + row.none_inside + row.several_inside, row.trials);
        }
        write_pair_outputs(dir.path(), &sweep).unwrap();
        let back: Vec<TrialOutcome> = read_jsonl(&dir.path().join(PAIR_TRIALS)).unwrap();
        assert_eq!(back, sweep.trials);
        assert_eq!(summarize_pairs(&back, &config).unwrap(), sweep.summary);
        let csv: Vec<PairCsvRow> = read_csv(&dir.path().join(PAIR_CSV)).unwrap();
        assert_eq!(csv.len(), 3);
        assert_eq!(csv[2], PairCsvRow::from(&sweep.summary.rows[2]));
    }

    #[test]
    fn multi_sweep_counts() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig {
            n_list: vec![256],
            count: Some(4),
            ..small_config(dir.path())
        };
        let sweep = run_multi_sweep(&config).unwrap();
        assert_eq!(sweep.records.len(), 100);
        assert!(sweep.records.iter().all(|r| r.outcome.per_xi.len() == 4));
        assert_eq!(sweep.summary.rows[0].count, 4);
        write_multi_outputs(dir.path(), &sweep).unwrap();
        let back: Vec<MultiRecord> = read_jsonl(&dir.path().join(MULTI_TRIALS)).unwrap();
        assert_eq!(summarize_multi(&back, &config), sweep.summary);
    }

    #[test]
    fn lemma_sweep_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config(dir.path());
        let sweep = run_lemma_sweep(&config).unwrap();
        assert_eq!(sweep.summary.rows.len(), 3);
        for row in &sweep.summary.rows {
            assert!(row.near_radius < row.ball_radius);
            assert!(row.binomial_mean > 0.0);
        }
        assert!(sweep.records.iter().all(|r| r.near_count <= r.ball_count));
    }

    #[test]
    fn too_few_trials_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig {
            trials_per_n: 10,
            ..small_config(dir.path())
        };
        assert!(matches!(run_pair_sweep(&config), Err(Error::Config(_))));
    }
}

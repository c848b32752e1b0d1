use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use critpair::experiment::sweep::{
    read_jsonl, summarize_pairs, write_json, write_lemma_outputs, write_multi_outputs, write_pair_outputs, PAIR_TRIALS,
};
use critpair::experiment::{
    emit_plot, render_sample_svg, render_summary_svg, run_lemma_sweep, run_multi_sweep, run_pair_sweep,
    ExperimentConfig, Layout, PlotData,
};
use critpair::pairing::{predict_with_margin, trial_rng};
use critpair::solver::all_critical_points;
use critpair::{ChartPoint, ConditionedSample, Error, TrialOutcome};

const EXIT_CONFIG: u8 = 2;
const EXIT_INDETERMINATE: u8 = 3;

#[derive(Parser)]
#[command(name = "critpair", version, about = "Pairing of zeros and critical points of random polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one conditioned sample, solve for its critical points and plot it.
    Demo(Common),
    /// Single pinned zero: paired fraction against N.
    PairSweep(Common),
    /// Several well-spaced pinned zeros paired simultaneously.
    MultiSweep(Common),
    /// Zero-count and second-moment statistics around the prediction.
    Lemmas(Common),
    /// Print the predicted paired point and contour for each N.
    Predict(Common),
    /// Re-aggregate stored pair-sweep trials and refit the failure slope.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Trial records; defaults to the pair-sweep file in the output directory.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// uniform, gaussian, cap:<radius> or tilted:<x>,<y>,<z>,<strength>.
    #[arg(long)]
    measure: Option<String>,
    /// Pinned zero as `re,im` (or just `re`).
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    /// Comma-separated degrees.
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Contour radius in units of 1/N.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Pinned-zero count for multi sweeps (default ⌊N^alpha⌋).
    #[arg(long)]
    count: Option<usize>,
    /// circle or random.
    #[arg(long)]
    layout: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "CRITPAIR_THREADS")]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config_error(message: impl Into<String>) -> anyhow::Error {
    Error::Config(message.into()).into()
}

fn parse_xi(text: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| config_error(format!("bad xi `{text}`")));
    match parts[..] {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(config_error(format!("bad xi `{text}`"))),
    }
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(m) = &self.measure {
            c.measure = m.parse()?;
        }
        if let Some(x) = &self.xi {
            c.xi = parse_xi(x)?;
        }
        if let Some(n) = &self.n {
            c.n_list = n.clone();
        }
        if let Some(layout) = &self.layout {
            c.layout = match layout.as_str() {
                "circle" => Layout::Circle,
                "random" => Layout::Random,
                other => return Err(config_error(format!("unknown layout `{other}`"))),
            };
        }
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field.clone() { c.$target = v; })*
            };
        }
        set!(trials => trials_per_n, r => r, eta => eta, kappa => kappa, delta => delta, alpha => alpha,
             epsilon => epsilon, seed => seed, threads => threads, out => out);
        if self.count.is_some() {
            c.count = self.count;
        }
        c.validate()?;
        Ok(c)
    }
}

fn exit_for_indeterminate(frac: f64, config: &ExperimentConfig) -> ExitCode {
    if frac > config.indeterminate_threshold {
        eprintln!(
            "warning: {:.1}% of trials were indeterminate (threshold {:.1}%)",
            100.0 * frac,
            100.0 * config.indeterminate_threshold
        );
        ExitCode::from(EXIT_INDETERMINATE)
    } else {
        ExitCode::SUCCESS
    }
}

fn demo(config: &ExperimentConfig) -> Result<ExitCode> {
    let mu = config.measure.build()?;
    let n = config.n_list[0];
    let xi = config.xi();
    let mut rng = trial_rng(config.seed, n, 0);
    let sample = ConditionedSample::draw(&mu, vec![xi], n, &mut rng)?;
    let critical = all_critical_points(&sample, 1e-12)?;
    let prediction = predict_with_margin(&mu, ChartPoint::Finite(xi), n, config.r, config.margin).ok();
    let data = PlotData {
        title: format!("{} zeros, N = {n}, seed {}", config.measure, config.seed),
        zeros: sample.random_zeros().to_vec(),
        pinned: sample.pinned().to_vec(),
        critical: critical.points.clone(),
        degree_drop: critical.degree_drop,
        predictions: prediction.iter().map(|p| p.w_exact).collect(),
        contours: prediction.iter().map(|p| p.contour).collect(),
    };
    let svg_path = config.out.join("demo.svg");
    emit_plot(&render_sample_svg(&data), &svg_path)?;
    write_json(&config.out.join("demo_sample.json"), &sample.to_record(config.seed, 0))?;
    println!(
        "N = {n}: {} critical points, degree_drop = {}, converged = {}",
        critical.points.len(),
        critical.degree_drop,
        critical.converged
    );
    if let Some(p) = &prediction {
        let inside = critical.points.iter().filter(|w| p.contour.encloses(**w)).count();
        println!("predicted paired point {} ; critical points inside the contour: {inside}", p.w_exact);
    }
    println!("wrote {}", svg_path.display());
    Ok(ExitCode::SUCCESS)
}

fn pair_sweep(config: &ExperimentConfig) -> Result<ExitCode> {
    config.validate_for_sweep()?;
    let sweep = run_pair_sweep(config)?;
    write_pair_outputs(&config.out, &sweep)?;
    emit_plot(
        &render_summary_svg(&format!("pair sweep, {}", config.measure), &sweep.summary.rows),
        &config.out.join("pair_rates.svg"),
    )?;
    print!("{}", std::fs::read_to_string(config.out.join(critpair::experiment::sweep::PAIR_CSV))?);
    println!("failure fit: {}", serde_json::to_string(&sweep.summary.failure_fit)?);
    Ok(exit_for_indeterminate(sweep.summary.indeterminate_frac, config))
}

fn multi_sweep(config: &ExperimentConfig) -> Result<ExitCode> {
    config.validate_for_sweep()?;
    let sweep = run_multi_sweep(config)?;
    write_multi_outputs(&config.out, &sweep)?;
    print!("{}", std::fs::read_to_string(config.out.join(critpair::experiment::sweep::MULTI_CSV))?);
    Ok(exit_for_indeterminate(sweep.summary.indeterminate_frac, config))
}

fn lemmas(config: &ExperimentConfig) -> Result<ExitCode> {
    config.validate_for_sweep()?;
    let sweep = run_lemma_sweep(config)?;
    write_lemma_outputs(&config.out, &sweep)?;
    print!("{}", std::fs::read_to_string(config.out.join(critpair::experiment::sweep::LEMMA_CSV))?);
    println!("near-ball fit: {}", serde_json::to_string(&sweep.summary.near_fit)?);
    println!("second-moment fit: {}", serde_json::to_string(&sweep.summary.moment_fit)?);
    Ok(ExitCode::SUCCESS)
}

fn predict(config: &ExperimentConfig) -> Result<ExitCode> {
    let mu = config.measure.build()?;
    for &n in &config.n_list {
        let p = predict_with_margin(&mu, ChartPoint::Finite(config.xi()), n, config.r, config.margin)?;
        println!("{}", serde_json::to_string(&p)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn fit(config: &ExperimentConfig, input: Option<PathBuf>) -> Result<ExitCode> {
    let path = input.unwrap_or_else(|| config.out.join(PAIR_TRIALS));
    let trials: Vec<TrialOutcome> = read_jsonl(&path).with_context(|| format!("reading {}", path.display()))?;
    let summary = summarize_pairs(&trials, config)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(exit_for_indeterminate(summary.indeterminate_frac, config))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Demo(c) => demo(&c.resolve()?),
        Command::PairSweep(c) => pair_sweep(&c.resolve()?),
        Command::MultiSweep(c) => multi_sweep(&c.resolve()?),
        Command::Lemmas(c) => lemmas(&c.resolve()?),
        Command::Predict(c) => predict(&c.resolve()?),
        Command::Fit { common, input } => fit(&common.resolve()?, input),
    }
}

fn is_config_error(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(Error::Config(_) | Error::Exceptional(_) | Error::Spacing { .. })
    )
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_config_error(&e) {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

//! Configuration, sweeps, exponent fits and plots.

pub mod config;
pub mod fit;
pub mod plot;
pub mod sweep;

pub use config::{ExperimentConfig, Layout, MeasureSpec};
pub use fit::{fit_exponent, Fit, FitResult, RateRow};
pub use plot::{emit_plot, render_sample_svg, render_summary_svg, PlotData};
pub use sweep::{
    run_lemma_sweep, run_multi_sweep, run_pair_sweep, summarize_pairs, LemmaSweep, MultiSweep, PairSummary, PairSweep,
};

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::ZeroMeasure;

/// Textual measure selector: `uniform`, `gaussian`, `cap:<radius>` or
/// `tilted:<x>,<y>,<z>,<strength>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MeasureSpec {
    Uniform,
    Gaussian,
    Cap(f64),
    Tilted([f64; 3], f64),
}

impl MeasureSpec {
    pub fn build(&self) -> Result<ZeroMeasure> {
        match self {
            MeasureSpec::Uniform => Ok(ZeroMeasure::uniform()),
            MeasureSpec::Gaussian => Ok(ZeroMeasure::gaussian_at_omega()),
            MeasureSpec::Cap(radius) => ZeroMeasure::cap(*radius),
            MeasureSpec::Tilted(axis, strength) => ZeroMeasure::tilted(*axis, *strength),
        }
    }
}

impl FromStr for MeasureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown measure `{s}`"));
        let number = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        match name.trim() {
            "uniform" if args.is_empty() => Ok(MeasureSpec::Uniform),
            "gaussian" | "gaussian-at-omega" if args.is_empty() => Ok(MeasureSpec::Gaussian),
            "cap" => Ok(MeasureSpec::Cap(number(args)?)),
            "tilted" => {
                let v = args.split(',').map(number).collect::<Result<Vec<_>>>()?;
                match v[..] {
                    [x, y, z, s] => Ok(MeasureSpec::Tilted([x, y, z], s)),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for MeasureSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::Uniform => write!(f, "uniform"),
            MeasureSpec::Gaussian => write!(f, "gaussian"),
            MeasureSpec::Cap(r) => write!(f, "cap:{r}"),
            MeasureSpec::Tilted([x, y, z], s) => write!(f, "tilted:{x},{y},{z},{s}"),
        }
    }
}

impl From<MeasureSpec> for String {
    fn from(m: MeasureSpec) -> String {
        m.to_string()
    }
}

/// Placement of the pinned zeros in multi-zero sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Equally spaced on the unit circle.
    Circle,
    /// Rejection-sampled from the measure.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub measure: MeasureSpec,
    /// `[re, im]` of the pinned zero in single-zero runs.
    pub xi: [f64; 2],
    #[serde(rename = "N_list")]
    pub n_list: Vec<usize>,
    #[serde(rename = "trials_per_N")]
    pub trials_per_n: usize,
    pub r: f64,
    pub eta: f64,
    pub kappa: f64,
    /// Exponent of the ball radius `N^{−1/2+δ/2}` in the binomial check.
    pub delta: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// Number of pinned zeros in multi runs; `⌊N^α⌋` when absent.
    pub count: Option<usize>,
    pub layout: Layout,
    pub margin: f64,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; `0` lets the pool decide.
    pub threads: usize,
    /// Fraction of indeterminate trials above which a run is flagged.
    pub indeterminate_threshold: f64,
    pub bootstrap_resamples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            measure: MeasureSpec::Uniform,
            xi: [1.0, 0.0],
            n_list: vec![64, 128, 256, 512, 1024],
            trials_per_n: 2000,
            r: 0.5,
            eta: 0.25,
            kappa: 1.0,
            delta: 0.5,
            alpha: 0.5,
            epsilon: 0.5,
            count: None,
            layout: Layout::Circle,
            margin: 0.05,
            seed: 20240601,
            out: PathBuf::from("results"),
            threads: 0,
            indeterminate_threshold: 0.05,
            bootstrap_resamples: 1000,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::new(self.xi[0], self.xi[1])
    }

    /// Checks everything except the trial count.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.n_list.is_empty() {
            return fail("N_list is empty".into());
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return fail(format!("N_list must be strictly increasing, got {:?}", self.n_list));
        }
        if self.n_list[0] < 4 {
            return fail("every N must be at least 4".into());
        }
        if !(self.r > 0.0 && self.r.is_finite()) || self.r == 1.0 {
            return fail(format!("r must be positive and ≠ 1, got {}", self.r));
        }
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return fail(format!("eta must lie in (0, 1/2), got {}", self.eta));
        }
        if !(self.kappa > 0.0) {
            return fail(format!("kappa must be positive, got {}", self.kappa));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return fail(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        if !(self.alpha >= 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha must lie in [0, 1), got {}", self.alpha));
        }
        if !(self.margin > 0.0) {
            return fail(format!("margin must be positive, got {}", self.margin));
        }
        if !(self.xi[0].is_finite() && self.xi[1].is_finite()) {
            return fail("xi must be finite".into());
        }
        if !(0.0..=1.0).contains(&self.indeterminate_threshold) {
            return fail("indeterminate_threshold must lie in [0, 1]".into());
        }
        self.measure.build().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    /// [`validate`](Self::validate) plus the minimum trial count of a sweep.
    pub fn validate_for_sweep(&self) -> Result<()> {
        self.validate()?;
        if self.trials_per_n < 100 {
            return Err(Error::Config(format!(
                "sweeps need at least 100 trials per N, got {}",
                self.trials_per_n
            )));
        }
        Ok(())
    }

    /// Pinned-zero count for multi runs at degree `n`.
    pub fn multi_count(&self, n: usize) -> usize {
        self.count
            .unwrap_or_else(|| ((n as f64).powf(self.alpha).floor() as usize).max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_specs_round_trip() {
        for s in ["uniform", "gaussian", "cap:1.5", "tilted:0,0,1,0.5"] {
            let m: MeasureSpec = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
            m.build().unwrap();
        }
        assert!("cauchy".parse::<MeasureSpec>().is_err());
        assert!("tilted:1,2".parse::<MeasureSpec>().is_err());
    }

    #[test]
    fn toml_round_trip_and_defaults() {
        let c = ExperimentConfig::from_toml_str("measure = \"cap:2\"\nN_list = [8, 16]\ntrials_per_N = 100\n").unwrap();
        assert_eq!(c.measure, MeasureSpec::Cap(2.0));
        assert_eq!(c.r, 0.5);
        c.validate_for_sweep().unwrap();
        let again = ExperimentConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn validation_errors() {
        let bad = [
            "N_list = [16, 8]",
            "eta = 0.5",
            "r = 1.0",
            "alpha = 1.0",
            "epsilon = 0.0",
            "measure = \"cap:-1\"",
        ];
        for text in bad {
            let c = ExperimentConfig::from_toml_str(text).unwrap();
            assert!(matches!(c.validate(), Err(Error::Config(_))), "{text}");
        }
        assert!(ExperimentConfig::from_toml_str("nonsense = 1").is_err());
        let few = ExperimentConfig {
            trials_per_n: 99,
            ..ExperimentConfig::default()
        };
        assert!(few.validate().is_ok());
        assert!(few.validate_for_sweep().is_err());
    }

    #[test]
    fn multi_count_rule() {
        let c = ExperimentConfig::default();
        assert_eq!(c.multi_count(1024), 32);
        let fixed = ExperimentConfig {
            count: Some(5),
            ..c
        };
        assert_eq!(fixed.multi_count(1024), 5);
    }
}

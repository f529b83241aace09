//! Reproducible parallel experiments on random masks, and exhaustive scans
//! over all small masks.
//!
//! Every trial draws from its own ChaCha stream keyed by (seed, purpose,
//! trial index) and results are merged by counting, so reports do not depend
//! on the number of worker threads. `DEGEN_THREADS` caps the worker count.

mod experiments;
mod scans;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{SparseRegime, ValueDistribution};

pub use crate::models::Model;
pub use experiments::{
    run_condition41_experiment, run_experiment, run_gap_rate_experiment, run_isolated_histogram,
    run_matching_experiment, trial_sample, value_check_trials, ExperimentReport,
};
pub use scans::{
    mask_bitmap, mask_verdicts, oracle_equivalence_scan, threshold_scan, MaskVerdict, OracleLevel,
    OracleSummary, ThresholdSummary,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DEGEN_THREADS";

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Pm,
    Cond41,
    Histogram,
    GapRate,
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pm" => Ok(Self::Pm),
            "cond41" => Ok(Self::Cond41),
            "histogram" => Ok(Self::Histogram),
            "gap_rate" => Ok(Self::GapRate),
            other => Err(Error::Parse(format!("unknown target {other:?}"))),
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Pm => "pm",
            Self::Cond41 => "cond41",
            Self::Histogram => "histogram",
            Self::GapRate => "gap_rate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub model: Model,
    pub n: usize,
    pub c: f64,
    /// Diagonal probability; present iff the model is symmetric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub target: Target,
    /// Share of condition-4.1 trials that also get a spectral check.
    pub value_check_fraction: f64,
    /// Upper bound on the number of spectral checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_value_checks: Option<u64>,
    /// Fixed edge probability replacing the (ln N + c)/N schedule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_override: Option<f64>,
    #[serde(default)]
    pub distribution: ValueDistribution,
}

impl SimulationConfig {
    pub fn new(
        model: Model,
        n: usize,
        c: f64,
        q: Option<f64>,
        trials: u64,
        seed: u64,
        target: Target,
    ) -> Result<Self> {
        let cfg = Self {
            model,
            n,
            c,
            q,
            trials,
            seed,
            target,
            value_check_fraction: default_value_check_fraction(n),
            max_value_checks: default_max_value_checks(n),
            p_override: None,
            distribution: ValueDistribution::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_p_override(mut self, p: Option<f64>) -> Result<Self> {
        self.p_override = p;
        self.validate()?;
        Ok(self)
    }

    pub fn with_value_checks(mut self, fraction: f64, max: Option<u64>) -> Result<Self> {
        self.value_check_fraction = fraction;
        self.max_value_checks = max;
        self.validate()?;
        Ok(self)
    }

    pub fn with_distribution(mut self, dist: ValueDistribution) -> Self {
        self.distribution = dist;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "c = {} is not finite",
                self.c
            )));
        }
        match (self.model, self.q) {
            (Model::Asym, Some(_)) => {
                return Err(Error::InvalidConfig(
                    "q only applies to the sym model".into(),
                ))
            }
            (Model::Sym, None) => return Err(Error::InvalidConfig("the sym model needs q".into())),
            (Model::Sym, Some(q)) => crate::asymptotics::check_probability("q", q)?,
            (Model::Asym, None) => {}
        }
        crate::asymptotics::check_probability("value_check_fraction", self.value_check_fraction)?;
        if let Some(p) = self.p_override {
            crate::asymptotics::check_probability("p", p)?;
        }
        Ok(())
    }

    pub fn regime(&self) -> SparseRegime {
        SparseRegime {
            c: self.c,
            q: self.q.unwrap_or(0.0),
            p_override: self.p_override,
        }
    }

    pub fn symmetric(&self) -> bool {
        self.model == Model::Sym
    }
}

/// 1.0 up to N = 20, 0.01 from N = 500, 0.1 in between.
pub fn default_value_check_fraction(n: usize) -> f64 {
    if n <= 20 {
        1.0
    } else if n >= 500 {
        0.01
    } else {
        0.1
    }
}

/// Spectral checks at N ≥ 500 cost seconds each; cap them at ten.
pub fn default_max_value_checks(n: usize) -> Option<u64> {
    (n >= 500).then_some(10)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    #[serde(flatten)]
    pub config: SimulationConfig,
    /// Edge probability actually used.
    pub p: f64,
    /// The schedule left [0, 1] and was clamped.
    pub p_clamped: bool,
    pub successes: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Asymptotic prediction for the event.
    pub prediction: f64,
    pub abs_gap: f64,
    /// Half-width of the confidence interval, the sampling part of abs_gap.
    pub sampling_error: f64,
    pub value_checks: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

impl EstimateReport {
    pub const CSV_HEADER: &'static str =
        "model,N,c,q,trials,seed,target,estimate,ci_low,ci_high,prediction,abs_gap";

    pub fn csv_row(&self) -> String {
        let cfg = &self.config;
        let q = cfg.q.map(|q| q.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            cfg.model,
            cfg.n,
            cfg.c,
            q,
            cfg.trials,
            cfg.seed,
            cfg.target,
            self.estimate,
            self.ci_low,
            self.ci_high,
            self.prediction,
            self.abs_gap
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramReport {
    #[serde(flatten)]
    pub config: SimulationConfig,
    pub p: f64,
    pub p_clamped: bool,
    /// λ for the asymmetric model, μ for the symmetric one.
    pub intensity: f64,
    /// Occurrences of each observed isolated-point count.
    pub counts: BTreeMap<u64, u64>,
    /// Empirical pmf on 0..=max observed count.
    pub empirical: Vec<f64>,
    /// Poisson pmf on the same support.
    pub poisson: Vec<f64>,
    pub total_variation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::InvalidConfig(format!(
            "need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}"
        )));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 {
        0.0
    } else {
        (centre - half).clamp(0.0, p)
    };
    let high = if successes == trials {
        1.0
    } else {
        (centre + half).clamp(p, 1.0)
    };
    Ok((low, high))
}

/// Total variation distance between the empirical distribution of `counts`
/// and Poisson(λ), including the Poisson mass beyond the largest count.
pub fn total_variation(counts: &BTreeMap<u64, u64>, lambda: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let total: u64 = counts.values().sum();
    let max = counts.keys().next_back().copied().unwrap_or(0);
    let empirical: Vec<f64> = (0..=max)
        .map(|x| counts.get(&x).copied().unwrap_or(0) as f64 / total.max(1) as f64)
        .collect();
    let poisson: Vec<f64> = (0..=max)
        .map(|x| crate::asymptotics::poisson_pmf(lambda, x))
        .collect();
    let inside: f64 = empirical
        .iter()
        .zip(&poisson)
        .map(|(a, b)| (a - b).abs())
        .sum();
    let tail = (1.0 - poisson.iter().sum::<f64>()).max(0.0);
    let tv = (0.5 * (inside + tail)).clamp(0.0, 1.0);
    (empirical, poisson, tv)
}

/// Stream purposes; each gets an independent key.
pub mod purpose {
    pub const MASK: u64 = 1;
    pub const VALUES: u64 = 2;
    pub const CHECK: u64 = 3;
    pub const ORACLE: u64 = 4;
    pub const ROW: u64 = 5;
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn key(seed: u64, purpose: u64) -> u64 {
    splitmix(splitmix(seed) ^ purpose.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// The random stream of one trial.
pub fn trial_rng(seed: u64, purpose: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(key(seed, purpose));
    rng.set_stream(trial);
    rng
}

/// Uniform number in [0, 1) determined by (seed, purpose, trial).
pub(crate) fn trial_unit(seed: u64, purpose: u64, trial: u64) -> f64 {
    (splitmix(key(seed, purpose) ^ trial) >> 11) as f64 / (1u64 << 53) as f64
}

/// Seed for row `row` of a sweep.
pub fn derive_row_seed(base: u64, row: u64) -> u64 {
    splitmix(key(base, purpose::ROW) ^ row)
}

/// Runs `f` on every index in parallel and returns the results in index
/// order, or the error of the smallest failing index.
pub(crate) fn parallel_map<T, F>(count: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = thread_pool()?;
    let results: Vec<Result<T>> = pool.install(|| (0..count).into_par_iter().map(&f).collect());
    results.into_iter().collect()
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let k: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV}={v:?} is not a count")))?;
        builder = builder.num_threads(k);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn wilson_edges_and_midpoint() {
        assert_eq!(wilson_interval(0, 40, Z95).unwrap().0, 0.0);
        assert_eq!(wilson_interval(40, 40, Z95).unwrap().1, 1.0);
        let (lo, hi) = wilson_interval(50, 100, 1.96).unwrap();
        assert!((lo - 0.404).abs() < 5e-4 && (hi - 0.596).abs() < 5e-4);
        assert!(wilson_interval(3, 2, Z95).is_err());
        assert!(wilson_interval(0, 0, Z95).is_err());
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a: u64 = trial_rng(7, purpose::MASK, 3).random();
        let _: u64 = trial_rng(7, purpose::MASK, 2).random();
        let b: u64 = trial_rng(7, purpose::MASK, 3).random();
        assert_eq!(a, b);
        let c: u64 = trial_rng(7, purpose::VALUES, 3).random();
        assert_ne!(a, c);
        assert_ne!(derive_row_seed(1, 0), derive_row_seed(1, 1));
    }

    #[test]
    fn config_validation() {
        let ok = SimulationConfig::new(Model::Sym, 10, 0.0, Some(0.5), 5, 1, Target::Cond41);
        assert!(ok.is_ok());
        assert!(SimulationConfig::new(Model::Sym, 10, 0.0, None, 5, 1, Target::Pm).is_err());
        assert!(SimulationConfig::new(Model::Asym, 10, 0.0, Some(0.5), 5, 1, Target::Pm).is_err());
        assert!(SimulationConfig::new(Model::Asym, 0, 0.0, None, 5, 1, Target::Pm).is_err());
        assert!(SimulationConfig::new(Model::Asym, 3, 0.0, None, 0, 1, Target::Pm).is_err());
        assert_eq!("gap_rate".parse::<Target>().unwrap(), Target::GapRate);
    }
}

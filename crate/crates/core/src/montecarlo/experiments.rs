use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::{
    parallel_map, purpose, total_variation, trial_rng, trial_unit, wilson_interval, EstimateReport,
    HistogramReport, SimulationConfig, Target, Z95,
};
use crate::asymptotics::{lambda_of, mu_of, predict_distinct};
use crate::bipartite::{condition_4_1, has_perfect_matching, BipartiteMask};
use crate::error::{Error, Result};
use crate::models::{
    eigenvalues_distinct, sample_mask, sample_values, DistinctMode, MaskedMatrixSample, Model,
    DEFAULT_DISTINCT_TOL,
};

/// Either kind of report, as produced by [`run_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ExperimentReport {
    Estimate(EstimateReport),
    Histogram(HistogramReport),
}

/// Dispatches on `cfg.target`.
pub fn run_experiment(cfg: &SimulationConfig) -> Result<ExperimentReport> {
    Ok(match cfg.target {
        Target::Pm => ExperimentReport::Estimate(run_matching_experiment(cfg)?),
        Target::Cond41 => ExperimentReport::Estimate(run_condition41_experiment(cfg)?),
        Target::GapRate => ExperimentReport::Estimate(run_gap_rate_experiment(cfg)?),
        Target::Histogram => ExperimentReport::Histogram(run_isolated_histogram(cfg)?),
    })
}

fn expect_target(cfg: &SimulationConfig, target: Target) -> Result<()> {
    cfg.validate()?;
    if cfg.target != target {
        return Err(Error::InvalidConfig(format!(
            "config target is {}, expected {target}",
            cfg.target
        )));
    }
    Ok(())
}

fn trial_mask(cfg: &SimulationConfig, trial: u64) -> BipartiteMask {
    let mut rng = trial_rng(cfg.seed, purpose::MASK, trial);
    sample_mask(cfg.n, &cfg.regime(), cfg.symmetric(), &mut rng)
}

/// The masked matrix of trial `trial`: its mask and the values a spectral
/// check on that trial would use.
pub fn trial_sample(cfg: &SimulationConfig, trial: u64) -> MaskedMatrixSample {
    let mask = trial_mask(cfg, trial);
    let mut rng = trial_rng(cfg.seed, purpose::VALUES, trial);
    sample_values(&mask, cfg.distribution, &mut rng)
}

/// Poisson intensity of the isolated-point count: λ or μ.
fn intensity(cfg: &SimulationConfig) -> Result<f64> {
    match cfg.model {
        Model::Asym => Ok(lambda_of(cfg.c)),
        Model::Sym => mu_of(cfg.c, cfg.q.unwrap_or(0.0)),
    }
}

fn estimate(
    cfg: &SimulationConfig,
    successes: u64,
    prediction: f64,
    value_checks: u64,
    started: Instant,
) -> Result<EstimateReport> {
    let (p, p_clamped) = cfg.regime().p_clamped(cfg.n);
    let est = successes as f64 / cfg.trials as f64;
    let (ci_low, ci_high) = wilson_interval(successes, cfg.trials, Z95)?;
    Ok(EstimateReport {
        config: cfg.clone(),
        p,
        p_clamped,
        successes,
        estimate: est,
        ci_low,
        ci_high,
        prediction,
        abs_gap: (est - prediction).abs(),
        sampling_error: 0.5 * (ci_high - ci_low),
        value_checks,
        runtime_seconds: Some(started.elapsed().as_secs_f64()),
    })
}

/// P(the mask has a perfect matching); predicted e^{−λ}, or e^{−μ} for
/// symmetric masks.
pub fn run_matching_experiment(cfg: &SimulationConfig) -> Result<EstimateReport> {
    expect_target(cfg, Target::Pm)?;
    let started = Instant::now();
    let hits = parallel_map(cfg.trials, |t| {
        Ok(has_perfect_matching(&trial_mask(cfg, t)))
    })?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    estimate(cfg, successes, (-intensity(cfg)?).exp(), 0, started)
}

/// Trials that get a spectral check: those whose hash falls below the
/// check fraction, the first `max_value_checks` of them in trial order.
pub fn value_check_trials(cfg: &SimulationConfig) -> Vec<u64> {
    let cap = cfg.max_value_checks.unwrap_or(u64::MAX);
    (0..cfg.trials)
        .filter(|&t| trial_unit(cfg.seed, purpose::CHECK, t) < cfg.value_check_fraction)
        .take(usize::try_from(cap).unwrap_or(usize::MAX))
        .collect()
}

/// P(`condition_4_1`), with the graph verdict cross-checked against the
/// spectrum of a continuous realization on the selected trials.
pub fn run_condition41_experiment(cfg: &SimulationConfig) -> Result<EstimateReport> {
    expect_target(cfg, Target::Cond41)?;
    let started = Instant::now();
    let checks = value_check_trials(cfg);
    let verdicts = parallel_map(cfg.trials, |t| {
        let mask = trial_mask(cfg, t);
        let graph = condition_4_1(&mask);
        if checks.binary_search(&t).is_ok() {
            let mut rng = trial_rng(cfg.seed, purpose::VALUES, t);
            let sample = sample_values(&mask, cfg.distribution, &mut rng);
            let spectrum =
                eigenvalues_distinct(&sample, DistinctMode::Numeric, DEFAULT_DISTINCT_TOL)
                    .map_err(|e| match e {
                        Error::EigenNonConvergence { n, .. } => Error::EigenNonConvergence {
                            n,
                            seed: Some(cfg.seed),
                            trial: Some(t),
                        },
                        other => other,
                    })?;
            if spectrum != graph {
                return Err(Error::BridgeDisagreement {
                    seed: cfg.seed,
                    trial: t,
                    graph,
                    spectrum,
                });
            }
        }
        Ok(graph)
    })?;
    let successes = verdicts.iter().filter(|&&h| h).count() as u64;
    let prediction = predict_distinct(cfg.c, cfg.model, cfg.q.unwrap_or(0.0))?.p_distinct;
    estimate(cfg, successes, prediction, checks.len() as u64, started)
}

/// Distribution of the number of isolated points against its Poisson limit.
/// Asymmetric masks count isolated rows and columns together.
pub fn run_isolated_histogram(cfg: &SimulationConfig) -> Result<HistogramReport> {
    expect_target(cfg, Target::Histogram)?;
    let started = Instant::now();
    let xs = parallel_map(cfg.trials, |t| {
        Ok(trial_mask(cfg, t).isolated_count() as u64)
    })?;
    let mut counts = BTreeMap::new();
    for x in xs {
        *counts.entry(x).or_insert(0u64) += 1;
    }
    let lambda = intensity(cfg)?;
    let (empirical, poisson, tv) = total_variation(&counts, lambda);
    let (p, p_clamped) = cfg.regime().p_clamped(cfg.n);
    Ok(HistogramReport {
        config: cfg.clone(),
        p,
        p_clamped,
        intensity: lambda,
        counts,
        empirical,
        poisson,
        total_variation: tv,
        runtime_seconds: Some(started.elapsed().as_secs_f64()),
    })
}

/// P(no perfect matching and no isolated point), which should vanish.
pub fn run_gap_rate_experiment(cfg: &SimulationConfig) -> Result<EstimateReport> {
    expect_target(cfg, Target::GapRate)?;
    let started = Instant::now();
    let hits = parallel_map(cfg.trials, |t| {
        let mask = trial_mask(cfg, t);
        Ok(mask.isolated_count() == 0 && !has_perfect_matching(&mask))
    })?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    estimate(cfg, successes, 0.0, 0, started)
}

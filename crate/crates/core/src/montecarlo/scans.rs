use serde::Serialize;

use super::{parallel_map, purpose, trial_rng};
use crate::bipartite::{condition_4_1, has_perfect_matching, BipartiteMask};
use crate::error::{Error, Result};
use crate::models::{
    eigenvalues_distinct, sample_values, DistinctMode, Model, ValueDistribution,
    DEFAULT_DISTINCT_TOL,
};

const ORACLE_MAX_ASYM: usize = 3;
const ORACLE_MAX_SYM: usize = 4;
const THRESHOLD_MAX: usize = 4;

/// Rows of the mask as 0/1 strings joined by `/`.
pub fn mask_bitmap(mask: &BipartiteMask) -> String {
    let n = mask.n();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|l| if mask.contains(j, l) { '1' } else { '0' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("/")
}

fn mask_count(model: Model, n: usize) -> u64 {
    match model {
        Model::Asym => 1 << (n * n),
        Model::Sym => 1 << (n * (n + 1) / 2),
    }
}

fn mask_from_code(model: Model, n: usize, code: u64) -> BipartiteMask {
    match model {
        Model::Asym => BipartiteMask::from_code(n, code),
        Model::Sym => BipartiteMask::symmetric_from_code(n, code),
    }
}

/// Graph and spectral verdicts for one mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaskVerdict {
    pub code: u64,
    pub bitmap: String,
    pub graph: bool,
    /// Number of samples with distinct eigenvalues.
    pub distinct_samples: usize,
    pub samples: usize,
}

impl MaskVerdict {
    /// The samples are unanimous and agree with the graph verdict.
    pub fn agrees(&self) -> bool {
        let expect = if self.graph { self.samples } else { 0 };
        self.distinct_samples == expect
    }
}

/// Verdicts for every mask of order n, each sampled `samples` times with
/// uniform values.
pub fn mask_verdicts(
    model: Model,
    n: usize,
    samples: usize,
    seed: u64,
    mode: DistinctMode,
) -> Result<Vec<MaskVerdict>> {
    let max = match model {
        Model::Asym => ORACLE_MAX_ASYM,
        Model::Sym => ORACLE_MAX_SYM,
    };
    if n > max {
        return Err(Error::SearchTooLarge { n, max });
    }
    let key = seed ^ ((n as u64) << 56) ^ ((model == Model::Sym) as u64) << 63;
    parallel_map(mask_count(model, n), |code| {
        let mask = mask_from_code(model, n, code);
        let graph = condition_4_1(&mask);
        let mut distinct = 0;
        for s in 0..samples {
            let mut rng = trial_rng(key, purpose::ORACLE, code * samples as u64 + s as u64);
            let sample = sample_values(&mask, ValueDistribution::Uniform01, &mut rng);
            if eigenvalues_distinct(&sample, mode, DEFAULT_DISTINCT_TOL)? {
                distinct += 1;
            }
        }
        Ok(MaskVerdict {
            code,
            bitmap: mask_bitmap(&mask),
            graph,
            distinct_samples: distinct,
            samples,
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleLevel {
    pub n: usize,
    pub masks: u64,
    /// Masks satisfying the graph condition.
    pub satisfying: u64,
    pub failing: u64,
    pub disagreements: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub model: Model,
    pub max_n: usize,
    pub samples_per_mask: usize,
    pub exact: bool,
    pub levels: Vec<OracleLevel>,
    /// Bitmaps of masks where the spectral verdicts were split or
    /// contradicted the graph.
    pub disagreements: Vec<String>,
}

impl OracleSummary {
    pub fn total_disagreements(&self) -> u64 {
        self.levels.iter().map(|l| l.disagreements).sum()
    }
}

/// Compares the graph condition with sampled spectra on every mask of order
/// 1..=max_n.
pub fn oracle_equivalence_scan(
    model: Model,
    max_n: usize,
    samples_per_mask: usize,
    seed: u64,
    mode: DistinctMode,
) -> Result<OracleSummary> {
    if samples_per_mask == 0 {
        return Err(Error::InvalidConfig(
            "samples per mask must be at least 1".into(),
        ));
    }
    let mut levels = Vec::new();
    let mut disagreements = Vec::new();
    for n in 1..=max_n {
        let verdicts = mask_verdicts(model, n, samples_per_mask, seed, mode)?;
        let satisfying = verdicts.iter().filter(|v| v.graph).count() as u64;
        let bad: Vec<&MaskVerdict> = verdicts.iter().filter(|v| !v.agrees()).collect();
        disagreements.extend(bad.iter().map(|v| v.bitmap.clone()));
        levels.push(OracleLevel {
            n,
            masks: verdicts.len() as u64,
            satisfying,
            failing: verdicts.len() as u64 - satisfying,
            disagreements: bad.len() as u64,
        });
    }
    Ok(OracleSummary {
        model,
        max_n,
        samples_per_mask,
        exact: mode == DistinctMode::Exact,
        levels,
        disagreements,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdSummary {
    pub n: usize,
    pub masks: u64,
    /// Edge count n² − 2n + 2 from which `condition_4_1` must hold.
    pub cond41_threshold: usize,
    /// Edge count n² − n + 1 from which a perfect matching must exist.
    pub pm_threshold: usize,
    /// Masks at or above `cond41_threshold` failing `condition_4_1`.
    pub cond41_violations: Vec<String>,
    /// Masks at or above `pm_threshold` without a perfect matching.
    pub pm_violations: Vec<String>,
    /// Number of masks with n² − 2n + 1 edges failing `condition_4_1`.
    pub boundary_failures: u64,
    /// Their bitmaps, for n ≤ 3.
    pub boundary_examples: Vec<String>,
}

impl ThresholdSummary {
    pub fn holds(&self) -> bool {
        self.cond41_violations.is_empty() && self.pm_violations.is_empty()
    }
}

/// Exhaustive check of the edge-count thresholds over all asymmetric masks
/// of order n.
pub fn threshold_scan(n: usize) -> Result<ThresholdSummary> {
    if n == 0 || n > THRESHOLD_MAX {
        return Err(Error::SearchTooLarge {
            n,
            max: THRESHOLD_MAX,
        });
    }
    let nn = n * n;
    let cond41_threshold = nn + 2 - 2 * n;
    let pm_threshold = nn - n + 1;
    let boundary = cond41_threshold - 1;
    // (edge count, condition 4.1, perfect matching) per mask
    let rows = parallel_map(1 << nn, |code| {
        let mask = BipartiteMask::from_code(n, code);
        Ok((
            code.count_ones() as usize,
            condition_4_1(&mask),
            has_perfect_matching(&mask),
        ))
    })?;
    let bitmap = |code: usize| mask_bitmap(&BipartiteMask::from_code(n, code as u64));
    let mut summary = ThresholdSummary {
        n,
        masks: rows.len() as u64,
        cond41_threshold,
        pm_threshold,
        cond41_violations: Vec::new(),
        pm_violations: Vec::new(),
        boundary_failures: 0,
        boundary_examples: Vec::new(),
    };
    for (code, &(edges, cond41, pm)) in rows.iter().enumerate() {
        if edges >= cond41_threshold && !cond41 {
            summary.cond41_violations.push(bitmap(code));
        }
        if edges >= pm_threshold && !pm {
            summary.pm_violations.push(bitmap(code));
        }
        if edges == boundary && !cond41 {
            summary.boundary_failures += 1;
            if n <= 3 {
                summary.boundary_examples.push(bitmap(code));
            }
        }
    }
    Ok(summary)
}

//! Inputs shared by the benchmarks under `benches/`.

use degen_core::models::{sample_mask, sample_values};
use degen_core::montecarlo::{purpose, trial_rng};
use degen_core::{BipartiteMask, MaskedMatrixSample, SparseRegime, ValueDistribution};

/// Asymmetric mask of order n at p = (ln n + c)/n, fixed by `seed`.
pub fn sparse_mask(n: usize, c: f64, seed: u64) -> BipartiteMask {
    let regime = SparseRegime::new(c, 0.0).expect("q = 0 is valid");
    sample_mask(n, &regime, false, &mut trial_rng(seed, purpose::MASK, 0))
}

/// Uniform values on `sparse_mask(n, c, seed)`.
pub fn sparse_sample(n: usize, c: f64, seed: u64) -> MaskedMatrixSample {
    let mask = sparse_mask(n, c, seed);
    sample_values(
        &mask,
        ValueDistribution::Uniform01,
        &mut trial_rng(seed, purpose::VALUES, 0),
    )
}

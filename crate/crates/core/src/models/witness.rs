use super::distinct::{matrix_distinctness, DEFAULT_DISTINCT_TOL};
use super::MaskedMatrixSample;
use crate::bipartite::{condition_4_1_certificate, BipartiteMask, Certificate};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, Matrix};

/// Extra spacing offsets tried when the first choice of cycle products
/// happens to give two cycles the same root modulus.
const PRODUCT_RETRIES: usize = 8;

/// Odd-cycle closing weights tried are 2^-1 … 2^-EPS_STEPS.
const EPS_STEPS: i32 = 40;
const EPS_MIN_GAP: f64 = 1e-6;
const EPS_MIN_MODULUS: f64 = 1e-9;

/// Cycles of the partial permutation j ↦ assignment[j], each starting at
/// its smallest element.
fn certificate_cycles(cert: &Certificate) -> Vec<Vec<usize>> {
    let n = cert.assignment.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || cert.assignment[start].is_none() {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            cycle.push(j);
            j = cert.assignment[j].expect("assignment is a permutation off the removed index");
        }
        out.push(cycle);
    }
    out
}

fn verified(mask: &BipartiteMask, values: Matrix<f64>) -> Result<Option<MaskedMatrixSample>> {
    let report = matrix_distinctness(&values, mask.is_symmetric(), DEFAULT_DISTINCT_TOL)?;
    if !report.distinct {
        return Ok(None);
    }
    MaskedMatrixSample::new(mask.clone(), values).map(Some)
}

/// A sample with N distinct eigenvalues supported on a perfect matching of
/// G, or of G with one index deleted, or `None` when no such matching exists.
///
/// Cycle t of the matching permutation gets product t·N + 1: one entry
/// carries the product and the others are 1, so its eigenvalues are the
/// roots of λ^ℓ = t·N + 1.
pub fn distinct_witness_for_mask(g: &BipartiteMask) -> Result<Option<MaskedMatrixSample>> {
    if g.is_symmetric() {
        return Err(Error::NotAsymmetric);
    }
    let Some(cert) = condition_4_1_certificate(g) else {
        return Ok(None);
    };
    let n = g.n();
    let cycles = certificate_cycles(&cert);
    for retry in 0..=PRODUCT_RETRIES {
        let spacing = (n + retry) as f64;
        let mut values = Matrix::zeros(n, n);
        for (t, cycle) in cycles.iter().enumerate() {
            for (a, &j) in cycle.iter().enumerate() {
                let l = cert.assignment[j].expect("cycle member");
                values[(j, l)] = if a == 0 {
                    t as f64 * spacing + 1.0
                } else {
                    1.0
                };
            }
        }
        if let Some(sample) = verified(g, values)? {
            return Ok(Some(sample));
        }
    }
    Err(Error::InvalidConfig(format!(
        "no verified witness for a mask of order {n}"
    )))
}

/// Values for one cycle of a symmetric matching, written as (row, col, value)
/// on the upper side; the caller mirrors them.
fn cycle_entries(cycle: &[usize]) -> Result<Vec<(usize, usize, f64)>> {
    let k = cycle.len();
    let path: Vec<(usize, usize, f64)> = cycle.windows(2).map(|w| (w[0], w[1], 0.5)).collect();
    match k {
        1 => Ok(vec![(cycle[0], cycle[0], 1.0)]),
        _ if k.is_multiple_of(2) => Ok(path),
        _ => {
            let eps = odd_cycle_eps(k)?;
            let mut entries = path;
            entries.push((cycle[k - 1], cycle[0], eps / 2.0));
            Ok(entries)
        }
    }
}

/// First ε in 2^-1, 2^-2, … for which the k-cycle with off-diagonal 1/2 and
/// closing weight ε/2 has well separated, nonzero eigenvalues.
fn odd_cycle_eps(k: usize) -> Result<f64> {
    for step in 1..=EPS_STEPS {
        let eps = 2f64.powi(-step);
        let ev = symmetric_eigenvalues(&odd_cycle_matrix(k, eps))?;
        let gap = ev
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let modulus = ev.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        if gap > EPS_MIN_GAP && modulus > EPS_MIN_MODULUS {
            return Ok(eps);
        }
    }
    Err(Error::InvalidConfig(format!(
        "no closing weight separates a {k}-cycle"
    )))
}

fn odd_cycle_matrix(k: usize, eps: f64) -> Matrix<f64> {
    Matrix::from_fn(k, k, |i, j| {
        if i.abs_diff(j) == 1 {
            0.5
        } else if i.abs_diff(j) == k - 1 {
            eps / 2.0
        } else {
            0.0
        }
    })
}

/// Symmetric analog of [`distinct_witness_for_mask`]. Fixed points get a
/// diagonal 1, two-cycles and even cycles an open path with off-diagonal
/// 1/2, and odd cycles a path closed by a small weight ε/2. Cycle t is then
/// scaled by 1 + tδ so that different cycles do not share eigenvalues.
pub fn symmetric_distinct_witness(g: &BipartiteMask) -> Result<Option<MaskedMatrixSample>> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let Some(cert) = condition_4_1_certificate(g) else {
        return Ok(None);
    };
    let n = g.n();
    let blocks = certificate_cycles(&cert)
        .iter()
        .map(|c| cycle_entries(c))
        .collect::<Result<Vec<_>>>()?;
    let deltas = [
        0.1,
        std::f64::consts::SQRT_2 / 10.0,
        3f64.sqrt() / 10.0,
        std::f64::consts::PI / 20.0,
        std::f64::consts::E / 30.0,
    ];
    for delta in deltas {
        let mut values = Matrix::zeros(n, n);
        for (t, entries) in blocks.iter().enumerate() {
            let s = 1.0 + t as f64 * delta;
            for &(j, l, v) in entries {
                values[(j, l)] = s * v;
                values[(l, j)] = s * v;
            }
        }
        if let Some(sample) = verified(g, values)? {
            return Ok(Some(sample));
        }
    }
    Err(Error::InvalidConfig(format!(
        "no verified symmetric witness for a mask of order {n}"
    )))
}

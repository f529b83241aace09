use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::MaskedMatrixSample;
use crate::error::{Error, Result};
use crate::linalg::{
    block_eigenvalues, max_sweeps, strongly_connected_blocks, zero_multiplicity, EigenScalar,
    Matrix, ZeroMultiplicity,
};
use crate::polynomial::{characteristic_polynomial, has_multiple_root};
use crate::scalar::{rational_from_f64, Rational};

/// Relative gap below which two computed eigenvalues count as equal.
pub const DEFAULT_DISTINCT_TOL: f64 = 1e-8;

/// Blocks with an eigenvalue this close to zero (relative to the spectral
/// scale) get the kernel analysis.
const ZERO_BAND: f64 = 1e-3;

/// Relative size of a singular value treated as zero.
const NULL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistinctMode {
    Numeric,
    /// Exact rational arithmetic on the binary values of the entries.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinctnessReport {
    pub distinct: bool,
    /// One representative per cluster of coinciding eigenvalues.
    pub repeated_at: Vec<Complex64>,
    /// 1 + spectral radius.
    pub scale: f64,
    pub min_gap: f64,
}

pub fn eigenvalues_distinct(
    sample: &MaskedMatrixSample,
    mode: DistinctMode,
    tol: f64,
) -> Result<bool> {
    match mode {
        DistinctMode::Numeric => {
            Ok(matrix_distinctness(sample.values(), sample.mask().is_symmetric(), tol)?.distinct)
        }
        DistinctMode::Exact => exact_distinct(sample.values()),
    }
}

fn exact_distinct(values: &Matrix<f64>) -> Result<bool> {
    if values.rows() <= 1 {
        return Ok(true);
    }
    let q: Matrix<Rational> = values.map(|&v| rational_from_f64(v));
    let p = characteristic_polynomial(&q)?;
    Ok(!has_multiple_root(&p, 0.0)?)
}

fn hermitian_block<T: EigenScalar>(m: &Matrix<T>, idx: &[usize]) -> Option<Vec<Complex64>> {
    if idx.len() == 1 {
        return Some(vec![m[(idx[0], idx[0])].to_complex()]);
    }
    let d = DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
    let eig = SymmetricEigen::try_new(d, f64::EPSILON, max_sweeps(idx.len()))?;
    Some(
        eig.eigenvalues
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect(),
    )
}

/// Numeric distinctness of a square matrix.
///
/// The matrix is split into the diagonal blocks of its strongly connected
/// components. Each block is solved separately; blocks with an eigenvalue
/// near zero also get a kernel analysis, since a defective zero splits into a
/// cluster far wider than rounding. Eigenvalues closer than
/// `tol · (1 + spectral radius)` are reported as repeated.
pub fn matrix_distinctness<T: EigenScalar>(
    m: &Matrix<T>,
    hermitian: bool,
    tol: f64,
) -> Result<DistinctnessReport> {
    let n = m.ensure_square()?;
    let blocks = strongly_connected_blocks(m);
    let mut spectra = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let ev = if hermitian {
            hermitian_block(m, block)
        } else {
            block_eigenvalues(m, block)
        };
        spectra.push(ev.ok_or(Error::EigenNonConvergence {
            n,
            seed: None,
            trial: None,
        })?);
    }
    let radius = spectra
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let scale = 1.0 + radius;

    let mut repeated_zero = false;
    for (block, ev) in blocks.iter().zip(spectra.iter_mut()) {
        // normal blocks have no defective eigenvalues, and a repeated zero
        // shows up as a pair of eigenvalues within rounding of each other
        if block.len() < 2 || hermitian {
            continue;
        }
        let (pos, smallest) = ev
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty block");
        if smallest > ZERO_BAND * scale {
            continue;
        }
        match zero_multiplicity(m, block, NULL_TOL).ok_or(Error::EigenNonConvergence {
            n,
            seed: None,
            trial: None,
        })? {
            ZeroMultiplicity::Multiple => repeated_zero = true,
            ZeroMultiplicity::Simple => ev[pos] = Complex64::new(0.0, 0.0),
            ZeroMultiplicity::Absent => {}
        }
    }

    let all: Vec<Complex64> = spectra.into_iter().flatten().collect();
    let threshold = tol * scale;
    let (min_gap, mut repeated_at) = close_clusters(&all, threshold);
    if repeated_zero && !repeated_at.iter().any(|z| z.norm() <= threshold) {
        repeated_at.push(Complex64::new(0.0, 0.0));
    }
    Ok(DistinctnessReport {
        distinct: repeated_at.is_empty(),
        repeated_at,
        scale,
        min_gap: if repeated_zero { 0.0 } else { min_gap },
    })
}

/// Smallest pairwise distance, and the mean of each group of eigenvalues
/// linked by distances ≤ threshold.
fn close_clusters(ev: &[Complex64], threshold: f64) -> (f64, Vec<Complex64>) {
    let k = ev.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| ev[a].re.total_cmp(&ev[b].re));
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut min_gap = f64::INFINITY;
    for a in 0..k {
        for b in a + 1..k {
            let (x, y) = (ev[order[a]], ev[order[b]]);
            if y.re - x.re > threshold.max(min_gap) {
                break;
            }
            let d = (x - y).norm();
            min_gap = min_gap.min(d);
            if d <= threshold {
                let (ra, rb) = (find(&mut parent, order[a]), find(&mut parent, order[b]));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for (i, &z) in ev.iter().enumerate().take(k) {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(z);
    }
    let clusters = groups
        .into_values()
        .filter(|g| g.len() > 1)
        .map(|g| g.iter().sum::<Complex64>() / g.len() as f64)
        .collect();
    (min_gap, clusters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::BipartiteMask;

    fn sample(mask: BipartiteMask, v: Vec<f64>) -> MaskedMatrixSample {
        let n = mask.n();
        MaskedMatrixSample::new(mask, Matrix::from_vec(n, n, v)).unwrap()
    }

    #[test]
    fn diagonal_and_zero_matrices() {
        let d = sample(
            BipartiteMask::identity(3),
            vec![1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0],
        );
        for mode in [DistinctMode::Numeric, DistinctMode::Exact] {
            assert!(eigenvalues_distinct(&d, mode, DEFAULT_DISTINCT_TOL).unwrap());
        }
        let z = sample(BipartiteMask::empty(3), vec![0.0; 9]);
        for mode in [DistinctMode::Numeric, DistinctMode::Exact] {
            assert!(!eigenvalues_distinct(&z, mode, DEFAULT_DISTINCT_TOL).unwrap());
        }
        let r = matrix_distinctness(z.values(), false, DEFAULT_DISTINCT_TOL).unwrap();
        assert_eq!(r.repeated_at, vec![Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn counterexample_mask_is_degenerate_at_zero() {
        let mask = BipartiteMask::from_edges(3, &[(2, 0), (2, 1), (2, 2), (1, 0)]).unwrap();
        let s = sample(mask, vec![0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.7, 0.2, 0.9]);
        for mode in [DistinctMode::Numeric, DistinctMode::Exact] {
            assert!(!eigenvalues_distinct(&s, mode, DEFAULT_DISTINCT_TOL).unwrap());
        }
        let r = matrix_distinctness(s.values(), false, DEFAULT_DISTINCT_TOL).unwrap();
        assert!(r.repeated_at.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn defective_zero_inside_one_block() {
        // characteristic polynomial λ²(λ − 4) with a one-dimensional kernel
        let m = Matrix::from_vec(3, 3, vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 0.0, 1.0]);
        assert_eq!(strongly_connected_blocks(&m).len(), 1);
        assert!(!exact_distinct(&m).unwrap());
        let r = matrix_distinctness(&m, false, DEFAULT_DISTINCT_TOL).unwrap();
        assert!(!r.distinct);
        assert_eq!(r.repeated_at.len(), 1);
        assert!(r.repeated_at[0].norm() < 1e-12);
    }

    #[test]
    fn simple_zero_is_not_flagged() {
        let m = Matrix::from_vec(2, 2, vec![1.0, 1.0, 1.0, 1.0]);
        let r = matrix_distinctness(&m, false, DEFAULT_DISTINCT_TOL).unwrap();
        assert!(r.distinct);
        assert!((r.min_gap - 2.0).abs() < 1e-12);
    }
}

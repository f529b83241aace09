use nalgebra::{ComplexField, DMatrix, Dyn, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::hqr::{hessenberg_eigenvalues, reduce_to_hessenberg};
use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const EPS: f64 = f64::EPSILON;

/// Total QR iteration budget for an n×n problem.
pub(crate) fn max_sweeps(n: usize) -> usize {
    30 * n.max(10)
}

/// Schur form of `m`, retried on orthogonally similar matrices when the
/// shifted QR iteration stalls. Stalls happen on structured sparse blocks
/// such as [[0, a, 0], [b, 0, c], [0, d, 0]], where the shifts sit
/// symmetrically between eigenvalues.
fn schur_with_retry<T: EigenScalar>(m: DMatrix<T>) -> Option<Schur<T, Dyn>> {
    let n = m.nrows();
    if let Some(s) = Schur::try_new(m.clone(), EPS, max_sweeps(n)) {
        return Some(s);
    }
    for attempt in 1..=3 {
        let q = householder(n, attempt).map(T::from_real);
        let similar = &q * &m * &q;
        if let Some(s) = Schur::try_new(similar, EPS, max_sweeps(n)) {
            return Some(s);
        }
    }
    None
}

/// Symmetric orthogonal reflection I − 2vvᵀ/vᵀv for a fixed dense v.
fn householder(n: usize, attempt: usize) -> DMatrix<f64> {
    let v: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i + 1) as f64 * (attempt as f64 + 0.5).sqrt()).fract())
        .collect();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    DMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - 2.0 * v[i] * v[j] / vv
    })
}

/// Element types the dense eigen-solver accepts.
pub trait EigenScalar: Scalar + ComplexField<RealField = f64> + Copy {
    fn to_complex(self) -> Complex64;
    fn schur_eigenvalues(m: DMatrix<Self>) -> Option<Vec<Complex64>>;
}

impl EigenScalar for f64 {
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }

    fn schur_eigenvalues(m: DMatrix<Self>) -> Option<Vec<Complex64>> {
        let n = m.nrows();
        let mut h: Vec<f64> = m.transpose().as_slice().to_vec();
        reduce_to_hessenberg(&mut h, n);
        if let Some(ev) = hessenberg_eigenvalues(&h, n) {
            return Some(ev);
        }
        let schur = schur_with_retry(m)?;
        Some(schur.complex_eigenvalues().iter().copied().collect())
    }
}

impl EigenScalar for Complex64 {
    fn to_complex(self) -> Complex64 {
        self
    }

    fn schur_eigenvalues(m: DMatrix<Self>) -> Option<Vec<Complex64>> {
        let schur = schur_with_retry(m)?;
        Some(schur.eigenvalues()?.iter().copied().collect())
    }
}

fn to_dmatrix<T: EigenScalar>(m: &Matrix<T>, idx: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Index sets of the strongly connected components of the digraph with an
/// arc j → ℓ for every nonzero entry. Up to a simultaneous permutation the
/// matrix is block triangular with these blocks on the diagonal, so the
/// spectrum is the union of the block spectra.
pub fn strongly_connected_blocks<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for (j, v) in m.row(i).iter().enumerate() {
            if !v.is_zero() {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut idx: Vec<usize> = c.into_iter().map(|v| v.index()).collect();
            idx.sort_unstable();
            idx
        })
        .collect();
    blocks.sort_unstable();
    blocks
}

/// Eigenvalues of one diagonal block; 1×1 blocks are read off exactly.
pub fn block_eigenvalues<T: EigenScalar>(m: &Matrix<T>, idx: &[usize]) -> Option<Vec<Complex64>> {
    if idx.len() == 1 {
        return Some(vec![m[(idx[0], idx[0])].to_complex()]);
    }
    T::schur_eigenvalues(to_dmatrix(m, idx))
}

/// Full spectrum, assembled block by block.
pub fn eigenvalues<T: EigenScalar>(m: &Matrix<T>) -> Result<Vec<Complex64>> {
    let n = m.ensure_square()?;
    let mut out = Vec::with_capacity(n);
    for block in strongly_connected_blocks(m) {
        let ev = block_eigenvalues(m, &block).ok_or(Error::EigenNonConvergence {
            n,
            seed: None,
            trial: None,
        })?;
        out.extend(ev);
    }
    Ok(out)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Matrix<f64>) -> Result<Vec<f64>> {
    let n = m.ensure_square()?;
    let mut out = Vec::with_capacity(n);
    for block in strongly_connected_blocks(m) {
        if block.len() == 1 {
            out.push(m[(block[0], block[0])]);
            continue;
        }
        let eig = SymmetricEigen::try_new(to_dmatrix(m, &block), EPS, max_sweeps(block.len()))
            .ok_or(Error::EigenNonConvergence {
                n,
                seed: None,
                trial: None,
            })?;
        out.extend(eig.eigenvalues.iter().copied());
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Algebraic multiplicity of the eigenvalue 0 in the block, capped at two.
/// A gap test cannot see this reliably when the zero is defective, since a
/// Jordan block of size k splits by roughly eps^{1/k}. Geometric
/// multiplicity ≥ 2 shows up as two negligible singular values; a defective
/// simple-kernel zero shows up as orthogonal left and right null vectors.
pub fn zero_multiplicity<T: EigenScalar>(
    m: &Matrix<T>,
    idx: &[usize],
    rel_tol: f64,
) -> Option<ZeroMultiplicity> {
    let k = idx.len();
    if k == 1 {
        return Some(if m[(idx[0], idx[0])].is_zero() {
            ZeroMultiplicity::Simple
        } else {
            ZeroMultiplicity::Absent
        });
    }
    let block = to_dmatrix(m, idx);
    // singular values alone are much cheaper; vectors only when needed
    let s = SVD::try_new(block.clone(), false, false, EPS, max_sweeps(k))?.singular_values;
    let cutoff = rel_tol * s.max().max(1.0);
    let nullity = s.iter().filter(|&&x| x <= cutoff).count();
    if nullity >= 2 {
        return Some(ZeroMultiplicity::Multiple);
    }
    if nullity == 0 {
        return Some(ZeroMultiplicity::Absent);
    }
    let svd = SVD::try_new(block, true, true, EPS, max_sweeps(k))?;
    let u = svd.u.as_ref()?;
    let v_t = svd.v_t.as_ref()?;
    let z = svd.singular_values.imin();
    // y = u[:, z] spans the left kernel, x = conj(v_t[z, :]) the right one.
    let mut overlap = Complex64::new(0.0, 0.0);
    for i in 0..k {
        let y = u[(i, z)].to_complex();
        let x = v_t[(z, i)].to_complex().conj();
        overlap += y.conj() * x;
    }
    Some(if overlap.norm() <= ZERO_OVERLAP_TOL {
        ZeroMultiplicity::Multiple
    } else {
        ZeroMultiplicity::Simple
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroMultiplicity {
    Absent,
    Simple,
    /// Algebraic multiplicity at least two.
    Multiple,
}

/// Left and right null vectors of a simple zero have overlap equal to the
/// reciprocal eigenvalue condition number; for a defective zero it is zero
/// up to rounding.
const ZERO_OVERLAP_TOL: f64 = 1e-6;

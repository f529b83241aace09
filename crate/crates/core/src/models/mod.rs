//! Matrix realizations of masks.
//!
//! * constructive witnesses with N distinct eigenvalues for masks satisfying
//!   `condition_4_1`, asymmetric and symmetric;
//! * Bernoulli mask and continuous value samplers for the sparse regime;
//! * the numeric and exact distinctness oracle;
//! * a Haar-distributed unitary sampler built from rotations and phases.

mod distinct;
mod sampling;
mod witness;

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{check_probability, p_of_n_clamped};
use crate::bipartite::BipartiteMask;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use distinct::{
    eigenvalues_distinct, matrix_distinctness, DistinctMode, DistinctnessReport,
    DEFAULT_DISTINCT_TOL,
};
pub use sampling::{
    haar_unitary, sample_mask, sample_values, unitary_from_angles, ValueDistribution,
};
pub use witness::{distinct_witness_for_mask, symmetric_distinct_witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Asym,
    Sym,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asym" => Ok(Self::Asym),
            "sym" => Ok(Self::Sym),
            other => Err(Error::Parse(format!("unknown model {other:?}"))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Asym => "asym",
            Self::Sym => "sym",
        })
    }
}

/// Edge probability schedule p(N) = clamp((ln N + c)/N, 0, 1), with a
/// constant diagonal probability q for symmetric masks. `p_override`
/// replaces the schedule by a fixed p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparseRegime {
    pub c: f64,
    pub q: f64,
    pub p_override: Option<f64>,
}

impl SparseRegime {
    pub fn new(c: f64, q: f64) -> Result<Self> {
        check_probability("q", q)?;
        Ok(Self {
            c,
            q,
            p_override: None,
        })
    }

    pub fn fixed(p: f64, q: f64) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("q", q)?;
        Ok(Self {
            c: 0.0,
            q,
            p_override: Some(p),
        })
    }

    pub fn p(&self, n: usize) -> f64 {
        self.p_clamped(n).0
    }

    /// p(N) and whether the clamp to [0, 1] was active.
    pub fn p_clamped(&self, n: usize) -> (f64, bool) {
        match self.p_override {
            Some(p) => (p, false),
            None => p_of_n_clamped(n, self.c),
        }
    }
}

/// A mask together with real values vanishing off the mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedMatrixSample {
    mask: BipartiteMask,
    values: Matrix<f64>,
}

impl MaskedMatrixSample {
    /// Checks the shape, zeros off the mask and, for symmetric masks, value
    /// symmetry. Mask positions may still hold zeros.
    pub fn new(mask: BipartiteMask, values: Matrix<f64>) -> Result<Self> {
        let n = mask.n();
        if values.rows() != n || values.cols() != n {
            return Err(Error::NotSquare {
                rows: values.rows(),
                cols: values.cols(),
            });
        }
        for j in 0..n {
            for l in 0..n {
                let v = values[(j, l)];
                if !mask.contains(j, l) && v != 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "nonzero value {v} at ({j}, {l}) outside the mask"
                    )));
                }
                if mask.is_symmetric() && v != values[(l, j)] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Self { mask, values })
    }

    pub fn mask(&self) -> &BipartiteMask {
        &self.mask
    }

    pub fn values(&self) -> &Matrix<f64> {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.mask.n()
    }

    /// Plain text: `n`, then n rows of space-separated values.
    pub fn dump(&self) -> String {
        let n = self.n();
        let mut out = format!("{n}\n");
        for j in 0..n {
            let row: Vec<String> = self
                .values
                .row(j)
                .iter()
                .map(|v| format!("{v:e}"))
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// A bijection on {0..n} with its cycle decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidConfig(format!("{i} appears twice")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Builds σ from cycles given as index lists; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (a, &j) in cycle.iter().enumerate() {
                if j >= n {
                    return Err(Error::IndexOutOfRange { index: j, n });
                }
                images[j] = cycle[(a + 1) % cycle.len()];
            }
        }
        Self::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Cycles (j, σ(j), σ²(j), …), each starting at its smallest element,
    /// ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Σ x_j E_{j σ(j)}.
    pub fn matrix(&self, x: &[f64]) -> Result<Matrix<f64>> {
        let n = self.len();
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: x.len(),
            });
        }
        let mut m = Matrix::zeros(n, n);
        for (j, &l) in self.images.iter().enumerate() {
            m[(j, l)] = x[j];
        }
        Ok(m)
    }
}

/// Spectrum of Σ x_j E_{j σ(j)}: for each cycle of length ℓ with product r,
/// the ℓ-th roots of r.
pub fn permutation_model_spectrum(sigma: &Permutation, x: &[f64]) -> Result<Vec<Complex64>> {
    if x.len() != sigma.len() {
        return Err(Error::LengthMismatch {
            expected: sigma.len(),
            actual: x.len(),
        });
    }
    let mut out = Vec::with_capacity(x.len());
    for cycle in sigma.cycles() {
        let r: f64 = cycle.iter().map(|&j| x[j]).product();
        let len = cycle.len() as f64;
        let modulus = r.abs().powf(1.0 / len);
        let phase = if r < 0.0 { std::f64::consts::PI } else { 0.0 };
        for k in 0..cycle.len() {
            let theta = (phase + 2.0 * std::f64::consts::PI * k as f64) / len;
            out.push(Complex64::from_polar(modulus, theta));
        }
    }
    Ok(out)
}

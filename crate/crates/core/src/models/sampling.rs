use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{MaskedMatrixSample, SparseRegime};
use crate::bipartite::BipartiteMask;
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueDistribution {
    /// Uniform on the open interval (0, 1).
    #[default]
    Uniform01,
    StandardNormal,
}

impl ValueDistribution {
    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Self::Uniform01 => Open01.sample(rng),
            Self::StandardNormal => StandardNormal.sample(rng),
        }
    }
}

/// Calls `hit` with the indices in 0..total selected independently with
/// probability p, jumping between hits with geometric gaps drawn by
/// inversion, floor(ln U / ln(1 − p)).
fn bernoulli_positions<R: Rng + ?Sized>(
    total: usize,
    p: f64,
    rng: &mut R,
    mut hit: impl FnMut(usize),
) {
    if p <= 0.0 || total == 0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(hit);
        return;
    }
    let log_q = (-p).ln_1p();
    let mut pos = 0usize;
    loop {
        let u: f64 = Open01.sample(rng);
        let skip = (u.ln() / log_q).floor();
        if skip >= (total - pos) as f64 {
            return;
        }
        pos += skip as usize;
        hit(pos);
        pos += 1;
        if pos >= total {
            return;
        }
    }
}

/// Bernoulli mask in the given regime. Symmetric masks draw each unordered
/// off-diagonal pair once with probability p(N) and each diagonal bit with
/// probability q.
pub fn sample_mask<R: Rng + ?Sized>(
    n: usize,
    regime: &SparseRegime,
    symmetric: bool,
    rng: &mut R,
) -> BipartiteMask {
    let p = regime.p(n);
    if !symmetric {
        let mut m = BipartiteMask::empty(n);
        bernoulli_positions(n * n, p, rng, |pos| m.insert(pos / n, pos % n));
        return m;
    }
    let mut m = BipartiteMask::empty_symmetric(n);
    // row j of the strict upper triangle holds n − 1 − j pairs
    let mut row = 0usize;
    let mut row_start = 0usize;
    bernoulli_positions(n * n.saturating_sub(1) / 2, p, rng, |pos| {
        while pos >= row_start + (n - 1 - row) {
            row_start += n - 1 - row;
            row += 1;
        }
        m.insert_symmetric(row, row + 1 + (pos - row_start));
    });
    bernoulli_positions(n, regime.q, rng, |j| m.insert(j, j));
    m
}

/// Independent continuous values on the mask, zeros elsewhere; symmetric
/// masks draw once per unordered pair.
pub fn sample_values<R: Rng + ?Sized>(
    mask: &BipartiteMask,
    dist: ValueDistribution,
    rng: &mut R,
) -> MaskedMatrixSample {
    let n = mask.n();
    let mut values = Matrix::zeros(n, n);
    for (j, l) in mask.edges() {
        if mask.is_symmetric() {
            if l < j {
                continue;
            }
            let v = dist.draw(rng);
            values[(j, l)] = v;
            values[(l, j)] = v;
        } else {
            values[(j, l)] = dist.draw(rng);
        }
    }
    MaskedMatrixSample::new(mask.clone(), values).expect("values follow the mask")
}

/// The product of phases and plane rotations
/// ∏_{j<ℓ} exp(i x_ℓj P_ℓ) exp(i x_jℓ Q_jℓ) · ∏_j exp(i x_jj P_j),
/// with `angles[(j, ℓ)] = x_jℓ`.
pub fn unitary_from_angles(angles: &Matrix<f64>) -> Matrix<Complex64> {
    let n = angles.rows();
    let mut u = Matrix::<Complex64>::identity(n);
    for j in 0..n {
        for l in j + 1..n {
            let phase = Complex64::from_polar(1.0, angles[(l, j)]);
            for i in 0..n {
                u[(i, l)] *= phase;
            }
            let (s, c) = angles[(j, l)].sin_cos();
            for i in 0..n {
                let a = u[(i, j)];
                let b = u[(i, l)];
                u[(i, j)] = a * c - b * s;
                u[(i, l)] = a * s + b * c;
            }
        }
    }
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, angles[(j, j)]);
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-distributed N×N unitary. Angles with j ≥ ℓ are uniform on [0, 2π];
/// x_jℓ for j < ℓ has density 2(ℓ−j) sin x cos^{2(ℓ−j)−1} x on [0, π/2],
/// sampled as arccos(u^{1/(2(ℓ−j))}).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<Complex64> {
    let mut angles = Matrix::zeros(n, n);
    for j in 0..n {
        for l in j + 1..n {
            angles[(l, j)] = 2.0 * PI * rng.random::<f64>();
            let u: f64 = rng.random();
            angles[(j, l)] = u.powf(1.0 / (2 * (l - j)) as f64).acos();
        }
    }
    for j in 0..n {
        angles[(j, j)] = 2.0 * PI * rng.random::<f64>();
    }
    unitary_from_angles(&angles)
}

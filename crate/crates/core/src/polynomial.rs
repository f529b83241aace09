//! Monic polynomials, characteristic polynomials and the determinant form of
//! the discriminant.
//!
//! A degree-n monic polynomial λⁿ + a_{n−1}λⁿ⁻¹ + … + a_0 is stored by its n
//! lower coefficients. The discriminant is (−1)^{n(n−1)/2} times the
//! determinant of a (2n−1)×(2n−1) matrix whose upper n−1 rows carry the
//! coefficients of p and whose lower n rows carry those of p′, each row shifted
//! one column right of the previous one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, hessenberg, EigenScalar, Matrix};
use crate::scalar::Scalar;

/// Default relative tolerance for the floating multiple-root test.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Monic polynomial from a_0..a_{n−1}.
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DegenerateDegree);
        }
        Ok(Self { coeffs })
    }

    /// From the full coefficient list a_0..a_n; the leading one must be 1.
    pub fn from_full_coefficients(mut all: Vec<T>) -> Result<Self> {
        match all.pop() {
            None => Err(Error::DegenerateDegree),
            Some(lead) if lead != T::one() => Err(Error::NotMonic),
            Some(_) => Self::new(all),
        }
    }

    /// ∏ (λ − r) over the given roots.
    pub fn from_roots(roots: &[T]) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::DegenerateDegree);
        }
        // full coefficient vector, lowest degree first
        let mut full = vec![T::one()];
        for r in roots {
            let mut next = vec![T::zero(); full.len() + 1];
            for (k, c) in full.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + c.clone();
                next[k] = next[k].clone() - r.clone() * c.clone();
            }
            full = next;
        }
        Self::from_full_coefficients(full)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// a_0..a_{n−1}.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::one(), |acc, c| acc * x.clone() + c.clone())
    }

    /// The scale normalizer max(1, max|a_k|)^{2n−2}.
    pub fn discriminant_scale(&self) -> f64 {
        let m = self.coeffs.iter().map(Scalar::modulus).fold(1.0, f64::max);
        m.powi(2 * self.degree() as i32 - 2)
    }
}

impl<T: EigenScalar> Polynomial<T> {
    /// Roots as eigenvalues of the companion matrix.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        let companion = Matrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -self.coeffs[i]
            } else if i == j + 1 {
                T::one()
            } else {
                T::zero()
            }
        });
        eigenvalues(&companion)
    }
}

/// det(λI − M) as a monic polynomial. Exact scalars use Faddeev–LeVerrier;
/// floating scalars reduce to Hessenberg form first.
pub fn characteristic_polynomial<T: Scalar>(m: &Matrix<T>) -> Result<Polynomial<T>> {
    let n = m.ensure_square()?;
    if n == 0 {
        return Err(Error::DegenerateDegree);
    }
    let full = if T::EXACT {
        faddeev_leverrier(m)
    } else {
        hessenberg_charpoly(&hessenberg(m))
    };
    Polynomial::from_full_coefficients(full)
}

fn faddeev_leverrier<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    let n = a.rows();
    let mut full = vec![T::zero(); n + 1];
    full[n] = T::one();
    // M_k = A M_{k−1} + c_{n−k+1} I, c_{n−k} = −tr(A M_k)/k
    let mut mk = Matrix::<T>::zeros(n, n);
    for k in 1..=n {
        let am = a.matmul(&mk).expect("square");
        mk = am;
        for i in 0..n {
            mk[(i, i)] = mk[(i, i)].clone() + full[n - k + 1].clone();
        }
        let amk = a.matmul(&mk).expect("square");
        full[n - k] = -amk.trace() / T::from_i64(k as i64);
    }
    full
}

/// Characteristic polynomial of an upper Hessenberg matrix from the
/// recurrence on its leading principal submatrices.
fn hessenberg_charpoly<T: Scalar>(h: &Matrix<T>) -> Vec<T> {
    let n = h.rows();
    // p[k] holds the full coefficients of the k×k leading block.
    let mut p: Vec<Vec<T>> = vec![vec![T::one()]];
    for k in 0..n {
        let prev = &p[k];
        let mut next = vec![T::zero(); k + 2];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] = next[d + 1].clone() + c.clone();
            next[d] = next[d].clone() - h[(k, k)].clone() * c.clone();
        }
        let mut sub = T::one();
        for i in (0..k).rev() {
            sub = sub * h[(i + 1, i)].clone();
            if sub.is_zero() {
                break;
            }
            let w = h[(i, k)].clone() * sub.clone();
            for (d, c) in p[i].iter().enumerate() {
                next[d] = next[d].clone() - w.clone() * c.clone();
            }
        }
        p.push(next);
    }
    p.pop().expect("nonempty")
}

/// The (2n−1)×(2n−1) matrix whose determinant defines the discriminant.
pub fn build_discriminant_matrix<T: Scalar>(p: &Polynomial<T>) -> Result<Matrix<T>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::DegenerateDegree);
    }
    let size = 2 * n - 1;
    let a = p.coeffs();
    // [1, a_{n−1}, …, a_0]
    let upper: Vec<T> = std::iter::once(T::one())
        .chain(a.iter().rev().cloned())
        .collect();
    // [n, b_{n−1}, …, b_1] with b_k = k a_k
    let lower: Vec<T> = std::iter::once(T::from_i64(n as i64))
        .chain((1..n).rev().map(|k| T::from_i64(k as i64) * a[k].clone()))
        .collect();
    let mut m = Matrix::zeros(size, size);
    for r in 0..n - 1 {
        for (j, v) in upper.iter().enumerate() {
            m[(r, r + j)] = v.clone();
        }
    }
    for r in 0..n {
        for (j, v) in lower.iter().enumerate() {
            m[(n - 1 + r, r + j)] = v.clone();
        }
    }
    Ok(m)
}

pub fn discriminant<T: Scalar>(p: &Polynomial<T>) -> Result<T> {
    let n = p.degree();
    let det = build_discriminant_matrix(p)?.determinant()?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 {
        -det
    } else {
        det
    })
}

/// ∏_{j<ℓ} (λ_j − λ_ℓ)².
pub fn discriminant_from_roots<T: Scalar>(roots: &[T]) -> Result<T> {
    if roots.is_empty() {
        return Err(Error::DegenerateDegree);
    }
    let mut acc = T::one();
    for (j, a) in roots.iter().enumerate() {
        for b in &roots[j + 1..] {
            let d = a.clone() - b.clone();
            acc = acc * d.clone() * d;
        }
    }
    Ok(acc)
}

/// Exact scalars: discriminant is exactly zero. Floating scalars:
/// |Δ| ≤ tol · max(1, max|a_k|)^{2n−2}.
pub fn has_multiple_root<T: Scalar>(p: &Polynomial<T>, tol: f64) -> Result<bool> {
    let d = discriminant(p)?;
    Ok(if T::EXACT {
        d.is_zero()
    } else {
        d.modulus() <= tol * p.discriminant_scale()
    })
}

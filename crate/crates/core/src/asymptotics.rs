//! Closed-form limits and the factorial-moment toolkit.
//!
//! In the sparse regime p(n) = (ln n + c)/n the number of isolated points of
//! the random mask is asymptotically Poisson with mean λ = 2e^{−c}
//! (asymmetric) or μ = (1 − q)e^{−c} (symmetric, diagonal probability q), and
//! the probability of N distinct eigenvalues tends to e^{−λ}(1 + λ).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::Model;
use crate::scalar::{Rational, Scalar};

pub fn lambda_of(c: f64) -> f64 {
    2.0 * (-c).exp()
}

pub fn mu_of(c: f64, q_inf: f64) -> Result<f64> {
    check_probability("q", q_inf)?;
    Ok((1.0 - q_inf) * (-c).exp())
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityRange { name, value })
    }
}

/// Limiting probability of distinct eigenvalues, with the regime echoed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub model: Model,
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    pub p_distinct: f64,
}

impl Prediction {
    /// λ for the asymmetric model, μ for the symmetric one.
    pub fn intensity(&self) -> f64 {
        self.lambda.or(self.mu).unwrap_or(0.0)
    }
}

/// e^{−λ}(1 + λ) with λ = 2e^{−c}, or the same in μ = (1 − q)e^{−c}.
/// `q` is ignored for the asymmetric model.
pub fn predict_distinct(c: f64, model: Model, q_inf: f64) -> Result<Prediction> {
    let (q, lambda, mu, x) = match model {
        Model::Asym => {
            let l = lambda_of(c);
            (None, Some(l), None, l)
        }
        Model::Sym => {
            let m = mu_of(c, q_inf)?;
            (Some(q_inf), None, Some(m), m)
        }
    };
    Ok(Prediction {
        model,
        c,
        q,
        lambda,
        mu,
        p_distinct: poisson_pmf(x, 0) + poisson_pmf(x, 1),
    })
}

/// (ln n + c)/n clamped to [0, 1].
pub fn p_of_n(n: usize, c: f64) -> f64 {
    p_of_n_clamped(n, c).0
}

/// `p_of_n` together with whether the clamp was active.
pub fn p_of_n_clamped(n: usize, c: f64) -> (f64, bool) {
    let raw = ((n as f64).ln() + c) / n as f64;
    let p = raw.clamp(0.0, 1.0);
    (p, p != raw)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// x(x−1)…(x−k+1)/k!, defined for any rational x.
pub fn gen_binomial(x: &Rational, k: i64) -> Result<Rational> {
    if k < 0 {
        return Err(Error::InvalidConfig(format!(
            "binomial order must be nonnegative, got {k}"
        )));
    }
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (x - Rational::from_i64(i)) / Rational::from_i64(i + 1);
    }
    Ok(acc)
}

/// (Σ_{k=0}^m (−1)^k C(n+1, k), (−1)^m C(n, m)).
pub fn alternating_binomial_identity(n: u64, m: u64) -> (BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    for k in 0..=m {
        let term = binomial(n + 1, k);
        if k % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = binomial(n, m);
    let rhs = if m.is_multiple_of(2) { rhs } else { -rhs };
    (lhs, rhs)
}

/// Bounds on P(X = j) from factorial moments β_k = E C(X, k):
/// the alternating sum Σ_{k=j}^{K} (−1)^{k−j} C(k, j) β_k is a lower bound for
/// K = j + 2ℓ + 1 and an upper bound for K = j + 2ℓ.
pub fn bonferroni_bounds<T: Scalar>(betas: &[T], j: usize, ell: usize) -> Result<(T, T)> {
    let top = j + 2 * ell + 1;
    if betas.len() <= top {
        return Err(Error::InsufficientMoments {
            needed: top + 1,
            got: betas.len(),
        });
    }
    let mut upper = T::zero();
    let mut lower = T::zero();
    for (k, beta) in betas.iter().enumerate().take(top + 1).skip(j) {
        let c = T::from_i64(i64::try_from(binomial(k as u64, j as u64)).expect("small binomial"));
        let term = c * beta.clone();
        let signed = if (k - j).is_multiple_of(2) {
            term
        } else {
            -term
        };
        lower = lower + signed.clone();
        if k < top {
            upper = upper + signed;
        }
    }
    Ok((lower, upper))
}

/// E C(X, k) for X = Σ B_j of {0,1}-valued B_j, given
/// `sums[k] = Σ_{|I| = k} E ∏_{j∈I} B_j`. Sizes absent from `sums` count as 0,
/// except k = 0 which is always 1.
pub fn factorial_moment_from_indicators(sums: &[f64], k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    sums.get(k).copied().unwrap_or(0.0)
}

/// Σ_{|I| = k} E ∏_{j∈I} B_j for m indicators with the given joint law.
/// Each outcome is (probability, bit pattern of the B_j).
pub fn indicator_product_sum(joint: &[(f64, u64)], m: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut total = 0.0;
    for subset in 0u64..1 << m {
        if subset.count_ones() as usize != k {
            continue;
        }
        total += joint
            .iter()
            .filter(|(_, bits)| bits & subset == subset)
            .map(|(p, _)| p)
            .sum::<f64>();
    }
    total
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// base^exp treating 0^0 as 1.
fn pow_or_one(base: f64, exp: usize) -> f64 {
    if exp == 0 {
        1.0
    } else {
        base.powf(exp as f64)
    }
}

/// E C(X, k) for the isolated-point count of an asymmetric mask:
/// Σ_{k₁+k₂=k} C(n,k₁) C(n,k₂) (1−p)^{nk − k₁k₂}.
pub fn expected_isolated_asym(n: usize, p: f64, k: usize) -> f64 {
    (0..=k)
        .map(|k1| {
            let k2 = k - k1;
            if k1 > n || k2 > n {
                return 0.0;
            }
            let c = (ln_binomial(n, k1) + ln_binomial(n, k2)).exp();
            c * pow_or_one(1.0 - p, n * k - k1 * k2)
        })
        .sum()
}

/// E C(X, k) for the identified isolated-point count of a symmetric mask:
/// C(n,k) (1−q)^k (1−p)^{k(k−1)/2 + k(n−k)}.
pub fn expected_isolated_sym(n: usize, p: f64, q: f64, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    ln_binomial(n, k).exp()
        * pow_or_one(1.0 - q, k)
        * pow_or_one(1.0 - p, k * k.saturating_sub(1) / 2 + k * (n - k))
}

pub fn poisson_pmf(lambda: f64, x: u64) -> f64 {
    (1..=x).fold((-lambda).exp(), |acc, i| acc * lambda / i as f64)
}

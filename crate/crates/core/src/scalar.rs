//! Field elements used by the polynomial and determinant code.
//!
//! Two families are supported: exact (big rationals and Gaussian rationals)
//! and floating (`f64`, `Complex64`). Exact values go through fraction-free
//! elimination so zero tests are exact; floating values use LU with partial
//! pivoting.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{bareiss_determinant, lu_determinant, Matrix};

pub type Rational = BigRational;
pub type GaussianRational = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// True when arithmetic is exact and `is_zero` is a certificate.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Absolute value as a double, used for pivoting and tolerances.
    fn modulus(&self) -> f64;

    /// Determinant of a square matrix; callers check squareness.
    fn determinant(m: &Matrix<Self>) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn modulus(&self) -> f64 {
        self.abs()
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        lu_determinant(m)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        lu_determinant(m)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        let n = m.rows();
        let mut scale = BigInt::one();
        let mut ints = Vec::with_capacity(n * n);
        for i in 0..n {
            let row_lcm = m
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            for x in m.row(i) {
                ints.push(x.numer() * (&row_lcm / x.denom()));
            }
            scale *= row_lcm;
        }
        let det = bareiss_determinant(Matrix::from_vec(n, n, ints));
        BigRational::new(det, scale)
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Complex::new(Rational::from_i64(v), Rational::zero())
    }

    fn modulus(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        let n = m.rows();
        let mut scale = BigInt::one();
        let mut ints = Vec::with_capacity(n * n);
        for i in 0..n {
            let row_lcm = m.row(i).iter().fold(BigInt::one(), |acc, z| {
                acc.lcm(z.re.denom()).lcm(z.im.denom())
            });
            for z in m.row(i) {
                let re = z.re.numer() * (&row_lcm / z.re.denom());
                let im = z.im.numer() * (&row_lcm / z.im.denom());
                ints.push(Complex::new(re, im));
            }
            scale *= row_lcm;
        }
        let det = bareiss_determinant(Matrix::from_vec(n, n, ints));
        let scale = BigRational::from_integer(scale);
        Complex::new(
            BigRational::from_integer(det.re) / scale.clone(),
            BigRational::from_integer(det.im) / scale,
        )
    }
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Rational {
    BigRational::from_float(x).expect("finite value")
}

/// Parse `7`, `-3/4`, `0.125` or `1e-3` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

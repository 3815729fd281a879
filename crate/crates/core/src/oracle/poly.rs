use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::OracleError;

/// Dense polynomial in `x` with arbitrary-precision integer coefficients.
///
/// `coeffs[p]` multiplies `x^p`. Trailing zero coefficients are trimmed, so
/// the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        poly_mul(self, other)
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..n)
            .map(|p| self.coeffs.get(p).unwrap_or(&zero) - other.coeffs.get(p).unwrap_or(&zero))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..n)
            .map(|p| self.coeffs.get(p).unwrap_or(&zero) + other.coeffs.get(p).unwrap_or(&zero))
            .collect();
        Self::from_coeffs(coeffs)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
    }
}

/// Exact coefficient convolution.
pub fn poly_mul(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    if p.is_zero() || q.is_zero() {
        return IntPolynomial::zero();
    }
    let mut out = vec![BigInt::zero(); p.coeffs.len() + q.coeffs.len() - 1];
    for (a, pa) in p.coeffs.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (b, qb) in q.coeffs.iter().enumerate() {
            if !qb.is_zero() {
                out[a + b] += pa * qb;
            }
        }
    }
    IntPolynomial::from_coeffs(out)
}

/// Physicists' Hermite polynomials `H_0..=H_max`, from
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_polys(max: usize) -> Vec<IntPolynomial> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(IntPolynomial::one());
    if max >= 1 {
        out.push(IntPolynomial::from_i64(&[0, 2]));
    }
    for n in 1..max {
        let prev = &out[n];
        let prev2 = &out[n - 1];
        let mut coeffs = vec![BigInt::zero(); n + 2];
        for (p, c) in prev.coeffs().iter().enumerate() {
            coeffs[p + 1] += c * 2;
        }
        let two_n = BigInt::from(2 * n as u64);
        for (p, c) in prev2.coeffs().iter().enumerate() {
            coeffs[p] -= c * &two_n;
        }
        out.push(IntPolynomial::from_coeffs(coeffs));
    }
    out
}

pub fn hermite_poly(n: usize) -> IntPolynomial {
    hermite_polys(n).pop().expect("at least H_0")
}

/// Exact `R` with `integral of p(x) exp(-a x^2) dx = R sqrt(pi / a)`.
///
/// Uses the even moments `(2n-1)!! / (2a)^n`; odd powers integrate to zero.
pub fn gaussian_weighted_integral(p: &IntPolynomial, a: u32) -> Result<BigRational, OracleError> {
    if a == 0 {
        return Err(OracleError::BadWeight(a));
    }
    let Some(deg) = p.degree() else {
        return Ok(BigRational::zero());
    };
    let top = deg / 2;
    let two_a = BigInt::from(2 * a);
    // common denominator (2a)^top
    let mut numerator = BigInt::zero();
    let mut double_factorial = BigInt::one();
    let mut scale = num_traits::pow(two_a.clone(), top);
    for n in 0..=top {
        if n > 0 {
            double_factorial *= 2 * n as u64 - 1;
            scale /= &two_a;
        }
        if let Some(c) = p.coeffs().get(2 * n) {
            if !c.is_zero() {
                numerator += c * &double_factorial * &scale;
            }
        }
    }
    Ok(BigRational::new(numerator, num_traits::pow(two_a, top)))
}

pub(crate) fn sign_of(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigfloat::{HighPrecisionFloat, DEFAULT_PRECISION};
use super::poly::{gaussian_weighted_integral, hermite_polys, poly_mul, sign_of, IntPolynomial};
use super::OracleError;
use crate::index::{IndexTuple, IntegralKind};

/// Exact oracle result.
///
/// The unnormalized integral equals `raw_rational * sqrt(pi / a)` with
/// `a = 2` for W and Y and `a = 3` for U. The normalized value satisfies
/// `value^2 * pi^pi_power = |pi_scaled_square|`, where `pi_power` is 1 for W
/// and Y and 2 for U, and `pi_scaled_square` carries the sign of the value.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactValue {
    pub kind: IntegralKind,
    pub indices: IndexTuple,
    pub raw_rational: BigRational,
    pub pi_scaled_square: BigRational,
    pub pi_power: u32,
    pub float_value: HighPrecisionFloat,
}

impl ExactValue {
    pub fn to_f64(&self) -> f64 {
        self.float_value.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.raw_rational.is_zero()
    }

    fn from_raw(kind: IntegralKind, indices: IndexTuple, raw: BigRational) -> Self {
        let (a, pi_power) = match kind {
            IntegralKind::W | IntegralKind::Y => (2u32, 1),
            IntegralKind::U => (3u32, 2),
        };
        // 2^sum * prod(n!) from the normalization constant
        let mut norm = BigInt::one() << indices.level();
        for &n in indices.as_slice() {
            for f in 2..=n {
                norm *= f;
            }
        }
        let square = &raw * &raw / BigRational::from_integer(norm * a);
        let pi_scaled_square = if raw.is_negative() { -square.clone() } else { square.clone() };
        let float_value = HighPrecisionFloat::signed_sqrt_over_pi(
            raw.is_negative(),
            &to_biguint(square.numer()),
            &to_biguint(square.denom()),
            pi_power,
            DEFAULT_PRECISION,
        );
        ExactValue {
            kind,
            indices,
            raw_rational: raw,
            pi_scaled_square,
            pi_power,
            float_value,
        }
    }
}

fn to_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

/// Exact evaluator with a cache of Hermite polynomials up to a max degree.
#[derive(Debug, Clone)]
pub struct ExactOracle {
    hermite: Vec<IntPolynomial>,
}

impl ExactOracle {
    pub fn new(max_degree: u32) -> Self {
        ExactOracle {
            hermite: hermite_polys(max_degree as usize),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.hermite.len() as u32 - 1
    }

    fn h(&self, n: u32) -> &IntPolynomial {
        &self.hermite[n as usize]
    }

    fn check(&self, t: &IndexTuple) -> Result<(), OracleError> {
        if t.max_index() > self.max_degree() {
            return Err(OracleError::DegreeOutOfRange {
                tuple: *t,
                max_degree: self.max_degree(),
            });
        }
        Ok(())
    }

    fn product(&self, t: &IndexTuple) -> IntPolynomial {
        t.as_slice()
            .iter()
            .fold(IntPolynomial::one(), |acc, &n| poly_mul(&acc, self.h(n)))
    }

    /// `2i H_{i-1} H_j - 2j H_i H_{j-1}`, the bracket `H_i' H_j - H_i H_j'`.
    fn bracket(&self, i: u32, j: u32) -> IntPolynomial {
        let mut out = IntPolynomial::zero();
        if i > 0 {
            out = poly_mul(self.h(i - 1), self.h(j)).scale(&BigInt::from(2 * i));
        }
        if j > 0 {
            out = out.sub(&poly_mul(self.h(i), self.h(j - 1)).scale(&BigInt::from(2 * j)));
        }
        out
    }

    pub fn exact_w(&self, t: [u32; 4]) -> Result<ExactValue, OracleError> {
        let t = IndexTuple::four(t);
        self.check(&t)?;
        let raw = gaussian_weighted_integral(&self.product(&t), 2)?;
        Ok(ExactValue::from_raw(IntegralKind::W, t, raw))
    }

    pub fn exact_u(&self, t: [u32; 6]) -> Result<ExactValue, OracleError> {
        let t = IndexTuple::six(t);
        self.check(&t)?;
        let raw = gaussian_weighted_integral(&self.product(&t), 3)?;
        Ok(ExactValue::from_raw(IntegralKind::U, t, raw))
    }

    pub fn exact_y(&self, t: [u32; 4]) -> Result<ExactValue, OracleError> {
        let [i, j, k, l] = t;
        let t = IndexTuple::four(t);
        self.check(&t)?;
        let p = poly_mul(&self.bracket(i, j), &self.bracket(k, l));
        let raw = gaussian_weighted_integral(&p, 2)?;
        Ok(ExactValue::from_raw(IntegralKind::Y, t, raw))
    }

    /// Dispatches on `kind`; the tuple arity must match.
    pub fn exact(&self, kind: IntegralKind, t: &IndexTuple) -> Result<ExactValue, OracleError> {
        crate::index::check_arity(kind, t)?;
        let s = t.as_slice();
        match kind {
            IntegralKind::W => self.exact_w(s.try_into().expect("arity checked")),
            IntegralKind::Y => self.exact_y(s.try_into().expect("arity checked")),
            IntegralKind::U => self.exact_u(s.try_into().expect("arity checked")),
        }
    }
}

pub fn exact_w(t: [u32; 4]) -> ExactValue {
    let m = t.iter().copied().max().unwrap_or(0);
    ExactOracle::new(m).exact_w(t).expect("oracle sized to the tuple")
}

pub fn exact_u(t: [u32; 6]) -> ExactValue {
    let m = t.iter().copied().max().unwrap_or(0);
    ExactOracle::new(m).exact_u(t).expect("oracle sized to the tuple")
}

pub fn exact_y(t: [u32; 4]) -> ExactValue {
    let m = t.iter().copied().max().unwrap_or(0);
    ExactOracle::new(m).exact_y(t).expect("oracle sized to the tuple")
}

/// Sign of the exact value: -1, 0 or 1.
pub fn exact_sign(v: &ExactValue) -> i32 {
    sign_of(&v.raw_rational)
}

//! Minimal binary floating point over big integers, used to render exact
//! oracle results (square roots of rationals over powers of pi) at a few
//! hundred bits of precision.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// Bits carried by pi in the fixed-point constant.
const PI_BITS: u64 = 384;

/// Default significand length of rendered values.
pub const DEFAULT_PRECISION: u64 = 200;

/// `floor(pi * 2^PI_BITS)`, from Machin's formula.
fn pi_fixed() -> &'static BigUint {
    static PI: OnceLock<BigUint> = OnceLock::new();
    PI.get_or_init(|| {
        let guard = 32;
        let one = BigInt::one() << (PI_BITS + guard);
        let atan_inv = |x: u32| {
            let x2 = BigInt::from(x) * x;
            let mut term = &one / x;
            let mut sum = BigInt::zero();
            let mut k = 0u32;
            while !term.is_zero() {
                let t = &term / (2 * k + 1);
                if k % 2 == 0 {
                    sum += t;
                } else {
                    sum -= t;
                }
                term /= &x2;
                k += 1;
            }
            sum
        };
        let pi: BigInt = atan_inv(5) * 16 - atan_inv(239) * 4;
        (pi >> guard).to_biguint().expect("pi is positive")
    })
}

/// `negative ? -1 : 1` times `significand * 2^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighPrecisionFloat {
    negative: bool,
    significand: BigUint,
    exponent: i64,
}

impl HighPrecisionFloat {
    pub fn zero() -> Self {
        HighPrecisionFloat {
            negative: false,
            significand: BigUint::zero(),
            exponent: 0,
        }
    }

    /// `sign * sqrt(num / (den * pi^pi_power))` with at least `precision`
    /// significant bits (truncated).
    pub fn signed_sqrt_over_pi(negative: bool, num: &BigUint, den: &BigUint, pi_power: u32, precision: u64) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let pi_pow = num_traits::pow(pi_fixed().clone(), pi_power as usize);
        let den = den * &pi_pow;
        // ratio = num * 2^(pi_power * PI_BITS) / den; pick `shift` so that
        // ratio * 2^(2 shift) carries ~2 * precision bits
        let log2_ratio = num.bits() as i64 + (u64::from(pi_power) * PI_BITS) as i64 - den.bits() as i64;
        let shift = precision as i64 + 2 - log2_ratio.div_euclid(2);
        let e = 2 * shift + (u64::from(pi_power) * PI_BITS) as i64;
        let (n, d) = if e >= 0 {
            (num << e as u64, den)
        } else {
            (num.clone(), den << (-e) as u64)
        };
        let significand = (n / d).sqrt();
        HighPrecisionFloat {
            negative,
            significand,
            exponent: -shift,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.significand.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.negative && !self.is_zero()
    }

    /// Number of significant bits held.
    pub fn precision(&self) -> u64 {
        self.significand.bits()
    }

    /// Nearest `f64` (round half to even on the held significand).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.significand.bits();
        let (mantissa, exp) = if bits <= 53 {
            (self.significand.to_u64().expect("fits"), self.exponent)
        } else {
            let drop = bits - 53;
            let mut m = &self.significand >> drop;
            let rem = &self.significand - (&m << drop);
            let half = BigUint::one() << (drop - 1);
            if rem > half || (rem == half && m.bit(0)) {
                m += 1u32;
            }
            (m.to_u64().expect("54 bits at most"), self.exponent + drop as i64)
        };
        let magnitude = mantissa as f64 * pow2(exp);
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }

    /// Scientific-notation rendering with `digits` significant digits.
    pub fn to_scientific(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let approx = self.to_f64().abs();
        let mut e10 = approx.log10().floor() as i64;
        let scaled = loop {
            let k = digits as i64 - 1 - e10;
            let n = self.scaled_integer(k);
            let len = n.to_string().len() as i64;
            if len == digits as i64 {
                break n;
            }
            e10 += len - digits as i64;
        };
        let s = scaled.to_string();
        let sign = if self.negative { "-" } else { "" };
        format!("{sign}{}.{}e{e10}", &s[..1], &s[1..])
    }

    /// `round(|self| * 10^k)`.
    fn scaled_integer(&self, k: i64) -> BigUint {
        let ten_k = num_traits::pow(BigUint::from(10u32), k.unsigned_abs() as usize);
        let (mut num, mut den) = if k >= 0 {
            (&self.significand * ten_k, BigUint::one())
        } else {
            (self.significand.clone(), ten_k)
        };
        if self.exponent >= 0 {
            num <<= self.exponent as u64;
        } else {
            den <<= (-self.exponent) as u64;
        }
        (num * 2u32 + &den) / (den * 2u32)
    }

    /// `|self|^2 * pi^pi_power` as a fraction `(num, den)`, with pi taken at
    /// its fixed-point approximation.
    #[cfg(test)]
    pub(crate) fn square_times_pi(&self, pi_power: u32) -> (BigUint, BigUint) {
        let mut num = &self.significand * &self.significand * num_traits::pow(pi_fixed().clone(), pi_power as usize);
        let mut den = BigUint::one() << (u64::from(pi_power) * PI_BITS);
        let e = 2 * self.exponent;
        if e >= 0 {
            num <<= e as u64;
        } else {
            den <<= (-e) as u64;
        }
        (num, den)
    }
}

fn pow2(e: i64) -> f64 {
    // split to stay clear of overflow in the intermediate factor
    let half = e / 2;
    2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

impl fmt::Display for HighPrecisionFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific(f.precision().unwrap_or(40)))
    }
}

//! Scalar types for weights and probabilities.
//!
//! Counts are always exact ([`Count`]); what a count turns into when divided
//! by a total is up to the caller. [`Weight`] is implemented for exact
//! rationals and for `f32`/`f64`, so distributions, allocation laws and
//! multi-valued map audits can be evaluated in either arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision nonnegative count.
pub type Count = BigUint;

/// Exact rational number.
pub type Rational = BigRational;

pub trait Weight:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// `num / den`; `den` must be nonzero.
    fn from_counts(num: &BigUint, den: &BigUint) -> Self;

    fn as_f64(&self) -> f64;

    fn from_count(n: &BigUint) -> Self {
        Self::from_counts(n, &BigUint::one())
    }
}

impl Weight for BigRational {
    fn from_counts(num: &BigUint, den: &BigUint) -> Self {
        BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }

    fn as_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Weight for f64 {
    fn from_counts(num: &BigUint, den: &BigUint) -> Self {
        ratio_to_f64(num, den)
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Weight for f32 {
    fn from_counts(num: &BigUint, den: &BigUint) -> Self {
        ratio_to_f64(num, den) as f32
    }

    fn as_f64(&self) -> f64 {
        f64::from(*self)
    }
}

/// `num / den` as the nearest-ish `f64`, without overflowing for operands
/// far beyond `f64` range.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "ratio_to_f64: zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    // scale so the integer quotient carries ~64 significant bits
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        (num >> (-shift) as usize) / den
    };
    let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
    mantissa * 2f64.powi(-(shift as i32))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    let magnitude = ratio_to_f64(num.magnitude(), den.magnitude());
    if (num.sign() == num_bigint::Sign::Minus) ^ (den.sign() == num_bigint::Sign::Minus) {
        -magnitude
    } else {
        magnitude
    }
}

/// Natural logarithm of a positive count; `-inf` for zero.
pub fn ln_count(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

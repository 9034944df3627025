//! Law of the number of type I patterns falling in the first part of a slot
//! partition, when `t_i` type I patterns are spread uniformly over
//! `s1 + s2` slots.

use num_bigint::{BigInt, BigUint};
use num_traits::{Float, Zero};

use crate::error::{Result, SawError};
use crate::scalar::{Count, Rational, Weight};

/// Exact hypergeometric law: `P(k) = numerators[k - lo] / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeomLaw {
    pub s1: usize,
    pub s2: usize,
    pub t_i: usize,
    /// Smallest attainable `k`.
    pub lo: usize,
    /// `C(s1, k) C(s2, t_i − k)` for `k = lo..=hi`.
    pub numerators: Vec<Count>,
    /// `C(s1 + s2, t_i)`.
    pub denominator: Count,
}

impl HypergeomLaw {
    pub fn hi(&self) -> usize {
        self.lo + self.numerators.len() - 1
    }

    pub fn numerator(&self, k: usize) -> Count {
        if k < self.lo || k > self.hi() {
            return Count::zero();
        }
        self.numerators[k - self.lo].clone()
    }

    pub fn probability<P: Weight>(&self, k: usize) -> P {
        P::from_counts(&self.numerator(k), &self.denominator)
    }

    /// Whether the numerators add up to the denominator.
    pub fn is_normalized(&self) -> bool {
        self.numerators.iter().sum::<BigUint>() == self.denominator
    }

    /// Non-decreasing then non-increasing.
    pub fn is_unimodal(&self) -> bool {
        let peak = self
            .numerators
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1))
            .map_or(0, |(i, _)| i);
        self.numerators[..=peak].windows(2).all(|w| w[0] <= w[1])
            && self.numerators[peak..].windows(2).all(|w| w[0] >= w[1])
    }

    pub fn mean(&self) -> Rational {
        let m = self.s1 + self.s2;
        if m == 0 {
            return Rational::zero();
        }
        Rational::new(BigInt::from(self.t_i * self.s1), BigInt::from(m))
    }
}

fn check_args(s1: usize, s2: usize, t_i: usize) -> Result<()> {
    if t_i > s1 + s2 {
        return Err(SawError::Degenerate(format!(
            "t_i = {t_i} exceeds the slot count {}",
            s1 + s2
        )));
    }
    Ok(())
}

/// Builds the law with two running binomials, so every numerator is exact
/// without a table of binomial coefficients.
pub fn hypergeom_law(s1: usize, s2: usize, t_i: usize) -> Result<HypergeomLaw> {
    check_args(s1, s2, t_i)?;
    let lo = t_i.saturating_sub(s2);
    let hi = t_i.min(s1);
    let mut a: BigUint = num_integer::binomial(BigUint::from(s1), BigUint::from(lo));
    let mut b: BigUint = num_integer::binomial(BigUint::from(s2), BigUint::from(t_i - lo));
    let mut numerators = Vec::with_capacity(hi - lo + 1);
    for k in lo..=hi {
        numerators.push(&a * &b);
        if k < hi {
            // C(s1, k+1) = C(s1, k)(s1 − k)/(k + 1)
            a = a * (s1 - k) / (k + 1);
            // C(s2, j−1) = C(s2, j) j/(s2 − j + 1), j = t_i − k
            let j = t_i - k;
            b = b * j / (s2 - j + 1);
        }
    }
    Ok(HypergeomLaw {
        s1,
        s2,
        t_i,
        lo,
        numerators,
        denominator: num_integer::binomial(BigUint::from(s1 + s2), BigUint::from(t_i)),
    })
}

/// `C(s1,k) C(s2,t_i−k) / C(s1+s2,t_i)`; zero for unattainable `k`.
pub fn hypergeom_t1(s1: usize, s2: usize, t_i: usize, k: usize) -> Result<Rational> {
    check_args(s1, s2, t_i)?;
    if k > s1 || k > t_i || t_i - k > s2 {
        return Ok(Rational::zero());
    }
    let num: BigUint = num_integer::binomial(BigUint::from(s1), BigUint::from(k))
        * num_integer::binomial(BigUint::from(s2), BigUint::from(t_i - k));
    let den = num_integer::binomial(BigUint::from(s1 + s2), BigUint::from(t_i));
    Ok(Rational::from_counts(&num, &den))
}

fn shape<F: Float>(s1: usize, s2: usize, t_i: usize) -> Result<(F, F, F)> {
    let m = s1 + s2;
    if m == 0 || s1 == 0 || s2 == 0 || t_i == 0 || t_i == m {
        return Err(SawError::Degenerate(format!(
            "alpha and beta must lie strictly inside (0,1): s1={s1}, s2={s2}, t_i={t_i}"
        )));
    }
    let f = |x: usize| F::from(x).expect("usize converts to float");
    let mf = f(m);
    Ok((f(s1) / mf, f(t_i) / mf, mf))
}

/// Gaussian approximation to `P(T_I^1 = k)` in the variable
/// `z = k/(αβm) − 1`, with `m = s1 + s2`, `α = s1/m`, `β = t_i/m`.
pub fn gaussian_t1_approx<F: Float>(s1: usize, s2: usize, t_i: usize, k: usize) -> Result<F> {
    let (alpha, beta, m) = shape::<F>(s1, s2, t_i)?;
    let one = F::one();
    let two = one + one;
    let ab = alpha * beta;
    let spread = (one - alpha) * (one - beta);
    let z = F::from(k).expect("usize converts to float") / (ab * m) - one;
    let pi = F::from(std::f64::consts::PI).expect("pi converts");
    Ok((-(ab * m * z * z) / (two * spread)).exp() / (two * pi * ab * spread * m).sqrt())
}

/// `P(|T_I^1 − t_i s1/(s1+s2)| ≥ t)`, exact.
pub fn allocation_tail(s1: usize, s2: usize, t_i: usize, t: &Rational) -> Result<Rational> {
    let law = hypergeom_law(s1, s2, t_i)?;
    let mean = law.mean();
    let mut num = Count::zero();
    for (i, c) in law.numerators.iter().enumerate() {
        let k = Rational::from_integer(BigInt::from(law.lo + i));
        let dev = k - &mean;
        let dev = if dev < Rational::zero() { -dev } else { dev };
        if &dev >= t {
            num += c;
        }
    }
    Ok(Rational::from_counts(&num, &law.denominator))
}

/// `P(T_I^1 = k1) / P(T_I^1 = k2)`, exact; `None` when `k2` is unattainable.
pub fn resample_ratio(
    s1: usize,
    s2: usize,
    t_i: usize,
    k1: usize,
    k2: usize,
) -> Result<Option<Rational>> {
    let law = hypergeom_law(s1, s2, t_i)?;
    let d = law.numerator(k2);
    if d.is_zero() {
        return Ok(None);
    }
    Ok(Some(Rational::from_counts(&law.numerator(k1), &d)))
}

/// The same ratio under the Gaussian approximation.
pub fn gaussian_resample_ratio<F: Float>(
    s1: usize,
    s2: usize,
    t_i: usize,
    k1: usize,
    k2: usize,
) -> Result<F> {
    let (alpha, beta, m) = shape::<F>(s1, s2, t_i)?;
    let one = F::one();
    let ab = alpha * beta;
    let spread = (one - alpha) * (one - beta);
    let z = |k: usize| F::from(k).expect("usize converts to float") / (ab * m) - one;
    let (z1, z2) = (z(k1), z(k2));
    Ok((ab * m * (z2 * z2 - z1 * z1) / ((one + one) * spread)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn small_values() {
        assert_eq!(hypergeom_t1(1, 1, 1, 1).unwrap(), r(1, 2));
        assert_eq!(hypergeom_t1(2, 2, 2, 1).unwrap(), r(2, 3));
        assert!(hypergeom_t1(2, 2, 2, 3).unwrap().is_zero());
        assert!(hypergeom_t1(1, 1, 3, 0).is_err());
    }

    #[test]
    fn law_agrees_with_direct_formula() {
        for (s1, s2, t) in [(5, 3, 4), (0, 4, 2), (6, 0, 6), (7, 9, 0), (10, 10, 20)] {
            let law = hypergeom_law(s1, s2, t).unwrap();
            assert!(law.is_normalized());
            assert!(law.is_unimodal());
            for k in 0..=t + 1 {
                assert_eq!(
                    law.probability::<Rational>(k),
                    hypergeom_t1(s1, s2, t, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn gaussian_symmetry() {
        let g = |k| gaussian_t1_approx::<f64>(50, 50, 50, k).unwrap();
        for d in 0..10 {
            assert!((g(25 + d) - g(25 - d)).abs() < 1e-15);
            assert!(g(25) >= g(25 + d));
        }
        assert!(gaussian_t1_approx::<f64>(0, 5, 2, 0).is_err());
        assert!(gaussian_t1_approx::<f32>(5, 5, 10, 5).is_err());
        assert!(gaussian_t1_approx::<f32>(5, 5, 5, 2).unwrap() > 0.0);
    }

    #[test]
    fn tails() {
        assert!(allocation_tail(10, 10, 10, &Rational::zero())
            .unwrap()
            .is_one());
        assert!(allocation_tail(10, 10, 10, &r(6, 1)).unwrap().is_zero());
        let half = allocation_tail(1, 1, 1, &r(1, 2)).unwrap();
        assert!(half.is_one());
    }

    #[test]
    fn resample() {
        let exact = resample_ratio(100, 100, 100, 50, 55).unwrap().unwrap();
        let approx = gaussian_resample_ratio::<f64>(100, 100, 100, 50, 55).unwrap();
        assert!((approx - std::f64::consts::E).abs() < 1e-12);
        assert!(exact.as_f64() >= approx / 2.0);
        assert_eq!(resample_ratio(3, 3, 3, 1, 7).unwrap(), None);
    }
}

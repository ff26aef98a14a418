//! Arbitrary-precision rationals.
//!
//! Backed by `num_rational::BigRational`, which already keeps the
//! numerator and denominator coprime with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Parses `"3"`, `"-3/4"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Double-precision value of an exact rational.
///
/// Falls back to a ratio of separately converted parts when the direct
/// conversion is unavailable, which only happens for astronomically large
/// numerators and denominators.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        return x;
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Binomial coefficient as an exact rational (zero when `k > n`).
pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    big(&acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(2n - 1)!! = 1 * 3 * ... * (2n - 1)`, with `(-1)!! = 1`.
pub fn double_factorial_odd(n: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i + 1))
}

//! Arbitrary-precision rationals.
//!
//! `Rat` is `num_rational::BigRational`, which already keeps the
//! denominator positive and the fraction reduced. This module only adds the
//! handful of helpers the rest of the crate leans on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// `n/d` from machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q` (optional sign, decimal digits).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let bad = || Error::usage(format!("`{text}` is not a rational number"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    if den.starts_with(['-', '+']) {
        return Err(bad());
    }
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Arithmetic(format!("zero denominator in `{text}`")));
    }
    Ok(Rat::new(num, den))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rat {
    Rat::from_integer((1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

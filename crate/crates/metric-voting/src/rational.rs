//! Exact rational scalar used throughout the crate.
//!
//! All election bookkeeping (weights, pairwise margins, step functions,
//! biased metrics) is done in arbitrary-precision rational arithmetic so
//! that the algebraic identities asserted in the test suite hold exactly.
//! Floating-point values cross into the exact world through
//! [`rat_from_f64`], which is lossless for every finite `f64`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// `n/d` as an exact rational.
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lossless conversion: every finite `f64` is a dyadic rational.
///
/// Panics on NaN and infinities.
pub fn rat_from_f64(v: f64) -> Rational {
    Rational::from_float(v).expect("finite float")
}

pub fn rat_to_f64(v: &Rational) -> f64 {
    v.to_f64().expect("rational representable as f64")
}

/// Parses `p/q`, an integer, or a decimal literal like `0.65` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let err = || ParseRationalError(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| err())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac = BigInt::from_str(frac).map_err(|_| err())?;
        let whole = int.abs() * &scale + frac;
        let signed = if negative { -whole } else { whole };
        return Ok(Rational::new(signed, scale));
    }
    let int = BigInt::from_str(s).map_err(|_| err())?;
    Ok(Rational::from_integer(int))
}

/// Formats a rational as `p/q`, or just `p` for integers.
pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

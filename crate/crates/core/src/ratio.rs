//! Small helpers around exact fractions: parsing `p/q` and decimal strings,
//! formatting, and ceilings of products.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{GcError, Result};

/// Parses `"6/7"`, `"1"`, `"0.87"` or `".82"` into an exact fraction.
pub fn parse_ratio(text: &str) -> Result<Rational64> {
    let t = text.trim();
    let bad = || GcError::Parse(format!("not a fraction: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(GcError::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches('-');
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let whole: i64 = if int_digits.is_empty() { 0 } else { int_digits.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        let v = Rational64::new(whole * den + num, den);
        return Ok(if neg { -v } else { v });
    }
    let p: i64 = t.parse().map_err(|_| bad())?;
    Ok(Rational64::from_integer(p))
}

/// Always `p/q`, including integers (`1/1`), so readers can rely on the shape.
pub fn format_ratio(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn format_big(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_big(text: &str) -> Result<BigRational> {
    let bad = || GcError::Parse(format!("not a fraction: {text:?}"));
    let t = text.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// ⌈r·n⌉ for a non-negative fraction.
pub fn ceil_times(r: &Rational64, n: usize) -> usize {
    let v = *r * Rational64::from_integer(n as i64);
    v.ceil().to_integer().max(0) as usize
}

pub fn to_big(r: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `0 < alpha <= 1`.
pub fn check_alpha(alpha: &Rational64) -> Result<()> {
    if alpha.is_positive() && *alpha <= Rational64::one() {
        Ok(())
    } else {
        Err(GcError::Parameter(format!("alpha must lie in (0,1], got {}", format_ratio(alpha))))
    }
}

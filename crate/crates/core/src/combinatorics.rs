//! Binomial coefficients and the binomial-ratio comparisons that recur in
//! every feasibility condition.

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

/// C(n, k) as a big integer; zero when k > n.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// C(n, k) when it fits in a `usize`.
pub fn binom_usize(n: usize, k: usize) -> Option<usize> {
    binom(n as u64, k as u64).to_usize()
}

/// The big-integer pair (C(a,y), C(b,y)) compared against `1 - alpha`:
/// true iff `num / den <= 1 - alpha`.
pub fn ratio_at_most_one_minus(num: &BigUint, den: &BigUint, alpha: &Rational64) -> bool {
    let p = BigUint::from(*alpha.numer() as u64);
    let q = BigUint::from(*alpha.denom() as u64);
    // num/den <= (q-p)/q  <=>  num*q <= (q-p)*den
    num * &q <= (q - p) * den
}

/// C(s,y)/C(n,y) <= 1 - alpha.
pub fn binom_condition(n: usize, s: usize, y: usize, alpha: &Rational64) -> bool {
    let num = binom(s as u64, y as u64);
    let den = binom(n as u64, y as u64);
    if den.is_zero() {
        return false;
    }
    ratio_at_most_one_minus(&num, &den, alpha)
}

/// Exact value of C(s,y)/C(n,y) as a fraction, where it fits in 64 bits.
pub fn binom_ratio(n: usize, s: usize, y: usize) -> Option<Rational64> {
    let num = binom(s as u64, y as u64);
    let den = binom(n as u64, y as u64);
    let g = num_integer::Integer::gcd(&num, &den);
    if g.is_zero() {
        return None;
    }
    Some(Rational64::new((num / &g).to_i64()?, (den / &g).to_i64()?))
}

/// Lexicographic (1 < 2 < ...) enumeration of all `y`-subsets of `0..n`.
pub fn subsets(n: usize, y: usize) -> impl Iterator<Item = Vec<usize>> {
    itertools::Itertools::combinations(0..n, y)
}

use std::fmt;

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::combinatorics::{binom, binom_condition, ratio_at_most_one_minus};
use crate::ratio::{ceil_times, format_ratio};
use crate::scheme::GcScheme;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    /// Smallest replication y with C(s,y)/C(n,y) <= 1 − alpha.
    pub y_min: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub l_min: Rational64,
    /// Filled in for a concrete scheme: whether its load meets the bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
    /// Whether the scheme's y = ⌈n·l⌉ makes the ratio equal 1 − alpha.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tight: Option<bool>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// Minimum computation load for any (alpha, s)-feasible scheme on n workers.
/// y = s+1 always qualifies, so the scan terminates.
pub fn lower_bound(n: usize, s: usize, alpha: Rational64) -> BoundReport {
    let y_min = (1..=n).find(|&y| binom_condition(n, s, y, &alpha)).unwrap_or(n);
    BoundReport { y_min, l_min: Rational64::new(y_min as i64, n as i64), satisfied: None, tight: None }
}

/// The simple load bound alpha·(s+1)/n that ignores the integrality of y.
pub fn naive_bound(n: usize, s: usize, alpha: Rational64) -> Rational64 {
    alpha * Rational64::new(s as i64 + 1, n as i64)
}

fn scheme_y(scheme: &GcScheme) -> usize {
    let max = scheme.assignment().iter().map(Vec::len).max().unwrap_or(0);
    ceil_times(&Rational64::new(max as i64, scheme.k() as i64), scheme.n())
}

pub fn check_scheme_bound(scheme: &GcScheme) -> bool {
    binom_condition(scheme.n(), scheme.s(), scheme_y(scheme), &scheme.alpha())
}

pub fn scheme_bound_report(scheme: &GcScheme) -> BoundReport {
    let (n, s, alpha) = (scheme.n(), scheme.s(), scheme.alpha());
    let y = scheme_y(scheme);
    let num = binom(s as u64, y as u64);
    let den = binom(n as u64, y as u64);
    // num/den == (q−p)/q
    let (p, q) = (BigUint::from(*alpha.numer() as u64), BigUint::from(*alpha.denom() as u64));
    let tight = !den.is_zero() && &num * &q == (&q - &p) * &den;
    BoundReport { satisfied: Some(check_scheme_bound(scheme)), tight: Some(tight), ..lower_bound(n, s, alpha) }
}

/// Σ_j C(n − y_j, n − s) <= C(n,s)·k·(1 − alpha), k = y_list.len(), exactly.
pub fn lemma_condition(y_list: &[usize], n: usize, s: usize, alpha: Rational64) -> bool {
    let lhs: BigUint = y_list
        .iter()
        .map(|&y| if y > n { BigUint::zero() } else { binom((n - y) as u64, (n - s) as u64) })
        .sum();
    let rhs = binom(n as u64, s as u64) * BigUint::from(y_list.len());
    ratio_at_most_one_minus(&lhs, &rhs, &alpha)
}

/// Σ C(a_i, r) >= t1·C(a, r) + (t − t1)·C(a+1, r) with a = ⌊Σa_i / t⌋ and
/// t1 = (a+1)·t − Σa_i: spreading the a_i evenly never increases the sum.
pub fn convexity_claim(a_list: &[u64], r: u64) -> bool {
    if a_list.is_empty() {
        return true;
    }
    let t = a_list.len() as u64;
    let total: u64 = a_list.iter().sum();
    let a = total / t;
    let t1 = (a + 1) * t - total;
    let lhs: BigUint = a_list.iter().map(|&x| binom(x, r)).sum();
    let rhs = binom(a, r) * t1 + binom(a + 1, r) * (t - t1);
    lhs >= rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Impossibility {
    /// The general load bound: l < y_min/n.
    LoadBound,
    /// s = n−β+1, m = 1, β odd: l = 2/n is not enough.
    OddBetaTwoPerWorker,
    /// s > n−β+1, m = 1: l <= 2/n is not enough.
    ManyStragglersTwoPerWorker,
    /// Cyclic assignment, m = 1, r ∤ β: l <= r/n is not enough.
    CyclicDivisibility,
    /// l = 1/n forces s <= n−β.
    SinglePartition,
}

impl fmt::Display for Impossibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Impossibility::LoadBound => "load lower bound",
            Impossibility::OddBetaTwoPerWorker => "odd-beta lower bound at two partitions per worker",
            Impossibility::ManyStragglersTwoPerWorker => "two-partition lower bound beyond s = n-beta+1",
            Impossibility::CyclicDivisibility => "cyclic lower bound (r does not divide beta)",
            Impossibility::SinglePartition => "single-partition bound s <= n-beta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImpossibilityVerdict {
    pub ruled_out: bool,
    pub reasons: Vec<Impossibility>,
}

/// Which of the known impossibility results exclude an (n, n, m, l) scheme
/// with targets (alpha, s). `cyclic` restricts to the cyclic assignment.
pub fn impossibility_predicates(n: usize, alpha: Rational64, s: usize, m: usize, l: Rational64, cyclic: bool) -> ImpossibilityVerdict {
    let beta = ceil_times(&alpha, n);
    let frac = |num: usize| Rational64::new(num as i64, n as i64);
    let mut reasons = Vec::new();
    if l < lower_bound(n, s, alpha).l_min {
        reasons.push(Impossibility::LoadBound);
    }
    if beta < n && m == 1 {
        if s == n - beta + 1 && beta % 2 == 1 && l <= frac(2) {
            reasons.push(Impossibility::OddBetaTwoPerWorker);
        }
        if s > n - beta + 1 && l <= frac(2) {
            reasons.push(Impossibility::ManyStragglersTwoPerWorker);
        }
        let r = (s + 1 + beta).checked_sub(n).filter(|&r| r > 0);
        if let Some(r) = r {
            if cyclic && beta % r != 0 && l <= frac(r) {
                reasons.push(Impossibility::CyclicDivisibility);
            }
        }
    }
    if l <= frac(1) && s > n - beta {
        reasons.push(Impossibility::SinglePartition);
    }
    ImpossibilityVerdict { ruled_out: !reasons.is_empty(), reasons }
}

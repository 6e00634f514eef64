use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::combinatorics::{binom_usize, subsets};
use crate::error::{GcError, Result};
use crate::linalg::RowEchelon;
use crate::ratio::{ceil_times, format_ratio};
use crate::scheme::GcScheme;

pub const EXHAUSTIVE_MAX_SETS: usize = 1_000_000;
pub const EXHAUSTIVE_MAX_K: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Exhaustive,
    /// Uniform random s-subsets drawn from a seeded stream.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// 0-based straggler set with the smallest best recovery (first in
    /// enumeration order on ties).
    pub worst_set: Vec<usize>,
    pub worst_recovered: usize,
    pub worst_alpha: Rational64,
    pub required: usize,
    /// Number of checked sets below `required`.
    pub failing_sets: usize,
    pub sets_checked: usize,
    pub sampled: bool,
}

impl FeasibilityVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "feasible": self.feasible,
            "worst_set": self.worst_set.iter().map(|w| w + 1).collect::<Vec<_>>(),
            "worst_recovered": self.worst_recovered,
            "worst_alpha": format_ratio(&self.worst_alpha),
            "required": self.required,
            "failing_sets": self.failing_sets,
            "sets_checked": self.sets_checked,
            "sampled": self.sampled,
        })
    }
}

/// Decides whether every straggler set of size `s` leaves a 0/1 vector of
/// weight at least ⌈alpha·k⌉ in the span of the surviving rows.
pub fn oracle_feasible(scheme: &GcScheme, alpha: Rational64, s: usize, mode: OracleMode) -> Result<FeasibilityVerdict> {
    let (n, k) = (scheme.n(), scheme.k());
    if s > n {
        return Err(GcError::Parameter(format!("s={s} exceeds n={n}")));
    }
    let sets: Vec<Vec<usize>> = match mode {
        OracleMode::Exhaustive => {
            let count = binom_usize(n, s).filter(|&c| c <= EXHAUSTIVE_MAX_SETS);
            if count.is_none() || k > EXHAUSTIVE_MAX_K {
                return Err(GcError::TooLarge(format!(
                    "exhaustive mode needs C(n,s) <= {EXHAUSTIVE_MAX_SETS} and k <= {EXHAUSTIVE_MAX_K} (n={n}, s={s}, k={k}); use sampled mode"
                )));
            }
            subsets(n, s).collect()
        }
        OracleMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| {
                    let mut v = rand::seq::index::sample(&mut rng, n, s).into_vec();
                    v.sort_unstable();
                    v
                })
                .collect()
        }
    };
    let required = ceil_times(&alpha, k);
    let weights: Vec<usize> = sets.par_iter().map(|set| max_recoverable(scheme, set).0).collect();
    let (worst_idx, &worst) = weights
        .iter()
        .enumerate()
        .min_by_key(|&(i, &w)| (w, i))
        .ok_or_else(|| GcError::Parameter("no straggler sets to check".into()))?;
    Ok(FeasibilityVerdict {
        feasible: worst >= required,
        worst_set: sets[worst_idx].clone(),
        worst_recovered: worst,
        worst_alpha: Rational64::new(worst as i64, k as i64),
        required,
        failing_sets: weights.iter().filter(|&&w| w < required).count(),
        sets_checked: sets.len(),
        sampled: matches!(mode, OracleMode::Sampled { .. }),
    })
}

/// Largest recoverable index set (sorted, 0-based) when `stragglers` fail.
pub fn best_recovery(scheme: &GcScheme, stragglers: &[usize]) -> Vec<usize> {
    max_recoverable(scheme, stragglers).1
}

/// Weight and support of a maximum-weight 0/1 vector in the span of the
/// surviving rows.
pub fn max_recoverable(scheme: &GcScheme, stragglers: &[usize]) -> (usize, Vec<usize>) {
    let k = scheme.k();
    let rows = (0..scheme.n())
        .filter(|w| !stragglers.contains(w))
        .flat_map(|w| scheme.rows()[w].iter().map(move |r| r.to_dense(k)))
        .collect();
    let ech = RowEchelon::new(rows, k);
    if ech.rank() == 0 {
        return (0, Vec::new());
    }
    // Clear denominators column by column: v[c] = acc[c] / denom[c].
    let mut denom = vec![BigInt::one(); k];
    for row in ech.rows() {
        for (c, x) in row.iter().enumerate() {
            denom[c] = denom[c].lcm(x.denom());
        }
    }
    let scaled: Vec<Vec<BigInt>> = ech
        .rows()
        .iter()
        .map(|row| row.iter().enumerate().map(|(c, x)| x.numer() * (&denom[c] / x.denom())).collect())
        .collect();
    let fits = (0..k).all(|c| {
        let total: BigInt = scaled.iter().map(|r| r[c].abs()).sum::<BigInt>() + denom[c].abs();
        total.bits() < 120
    });
    let bits = if fits {
        let small = |v: &BigInt| v.to_i128().expect("checked above");
        let rows: Vec<Vec<i128>> = scaled.iter().map(|r| r.iter().map(small).collect()).collect();
        let denom: Vec<i128> = denom.iter().map(small).collect();
        Search::new(ech.pivots(), rows, denom, k).run()
    } else {
        Search::new(ech.pivots(), scaled, denom, k).run()
    };
    let mut support: Vec<usize> = Vec::new();
    // Rebuild the chosen vector exactly to read off its support.
    let mut v = vec![num_rational::BigRational::zero(); k];
    for (row, &b) in ech.rows().iter().zip(&bits) {
        if b {
            for (x, y) in v.iter_mut().zip(row) {
                *x += y;
            }
        }
    }
    for (c, x) in v.iter().enumerate() {
        if x.is_one() {
            support.push(c);
        } else {
            debug_assert!(x.is_zero());
        }
    }
    (support.len(), support)
}

/// Branch and bound over the pivot coordinates of a reduced echelon basis.
///
/// Every vector of the span is fixed by its pivot entries, so a 0/1 vector
/// is a choice of bits on the pivots. A non-pivot column only receives
/// contributions from rows whose pivot lies to its left, so it is final as
/// soon as those rows are decided and can be checked for 0/1 right away.
struct Search<T> {
    rows: Vec<Vec<T>>,
    denom: Vec<T>,
    /// Non-pivot columns that become final after deciding row i.
    settle: Vec<Vec<usize>>,
    /// Columns not yet final before deciding row i that can still hold a 1.
    open_after: Vec<usize>,
    acc: Vec<T>,
    bits: Vec<bool>,
    best: Option<usize>,
    best_bits: Vec<bool>,
}

impl<T> Search<T>
where
    T: Clone + Zero + PartialEq + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
{
    fn new(pivots: &[usize], rows: Vec<Vec<T>>, denom: Vec<T>, k: usize) -> Self {
        let rank = pivots.len();
        let mut settle = vec![Vec::new(); rank];
        for i in 0..rank {
            let end = if i + 1 < rank { pivots[i + 1] } else { k };
            settle[i] = (pivots[i] + 1..end).filter(|&c| rows.iter().any(|r| !r[c].is_zero())).collect();
        }
        let mut open_after = vec![0; rank + 1];
        for i in (0..rank).rev() {
            open_after[i] = open_after[i + 1] + settle[i].len();
        }
        Search {
            rows,
            denom,
            settle,
            open_after,
            acc: vec![T::zero(); k],
            bits: vec![false; rank],
            best: None,
            best_bits: vec![false; rank],
        }
    }

    fn run(mut self) -> Vec<bool> {
        self.dfs(0, 0);
        self.best_bits
    }

    fn dfs(&mut self, i: usize, weight: usize) {
        let rank = self.bits.len();
        if i == rank {
            if self.best.is_none_or(|b| weight > b) {
                self.best = Some(weight);
                self.best_bits.clone_from(&self.bits);
            }
            return;
        }
        let upper = weight + (rank - i) + self.open_after[i];
        if self.best.is_some_and(|b| upper <= b) {
            return;
        }
        for take in [true, false] {
            if take {
                for (a, x) in self.acc.iter_mut().zip(&self.rows[i]) {
                    *a += x;
                }
            }
            let mut w = weight + take as usize;
            let mut ok = true;
            for &c in &self.settle[i] {
                if self.acc[c] == self.denom[c] {
                    w += 1;
                } else if !self.acc[c].is_zero() {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.bits[i] = take;
                self.dfs(i + 1, w);
            }
            if take {
                for (a, x) in self.acc.iter_mut().zip(&self.rows[i]) {
                    *a -= x;
                }
            }
        }
        self.bits[i] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;
    use crate::scheme::{Label, Row, SchemeParams};

    fn custom(n: usize, alpha: Rational64, s: usize, rows: Vec<Vec<Row>>) -> GcScheme {
        let assignment = rows.iter().map(|rs| rs.iter().flat_map(|r| r.support().collect::<Vec<_>>()).collect()).collect();
        GcScheme::new(SchemeParams::new(n, n, alpha, s).unwrap(), Label::Custom, assignment, rows).unwrap()
    }

    #[test]
    fn cyclic1_small() {
        let scheme = build_cyclic1(7, Rational64::new(6, 7), 3).unwrap();
        let v = oracle_feasible(&scheme, scheme.alpha(), 3, OracleMode::Exhaustive).unwrap();
        assert!(v.feasible);
        assert_eq!(v.worst_alpha, Rational64::new(6, 7));
        assert_eq!(v.sets_checked, 35);
    }

    #[test]
    fn uncoded_threshold() {
        let scheme = build_uncoded_forget_s(5, 2).unwrap();
        assert!(oracle_feasible(&scheme, Rational64::new(3, 5), 2, OracleMode::Exhaustive).unwrap().feasible);
        let v = oracle_feasible(&scheme, Rational64::new(4, 5), 2, OracleMode::Exhaustive).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.worst_set.len(), 2);
        assert_eq!(v.failing_sets, 10);
    }

    #[test]
    fn rational_combination_needed() {
        // Rows x1+x2, x2+x3, x1+x3: x1+x2+x3 is half their sum.
        let rows = vec![
            vec![Row::ones([0, 1])],
            vec![Row::ones([1, 2])],
            vec![Row::ones([0, 2])],
        ];
        let scheme = custom(3, Rational64::one(), 0, rows);
        assert_eq!(max_recoverable(&scheme, &[]), (3, vec![0, 1, 2]));
        assert_eq!(max_recoverable(&scheme, &[0]).0, 2);
    }

    #[test]
    fn non_binary_rows() {
        // 2x1 + x2 and x2: only x1 and x2 separately or together.
        let rows = vec![
            vec![Row::new(vec![(0, BigInt::from(2)), (1, BigInt::one())])],
            vec![Row::singleton(1)],
        ];
        let scheme = custom(2, Rational64::one(), 0, rows);
        assert_eq!(max_recoverable(&scheme, &[]).0, 2);
        assert_eq!(max_recoverable(&scheme, &[1]).0, 0);
    }

    #[test]
    fn too_large_and_sampled() {
        let scheme = build_uncoded_forget_s(30, 5).unwrap();
        assert!(matches!(
            oracle_feasible(&scheme, scheme.alpha(), 5, OracleMode::Exhaustive),
            Err(GcError::TooLarge(_))
        ));
        let mode = OracleMode::Sampled { samples: 200, seed: 4 };
        let a = oracle_feasible(&scheme, scheme.alpha(), 5, mode).unwrap();
        assert!(a.feasible && a.sampled);
        assert_eq!(a, oracle_feasible(&scheme, scheme.alpha(), 5, mode).unwrap());
    }
}

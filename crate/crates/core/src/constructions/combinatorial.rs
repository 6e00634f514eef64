use std::collections::HashSet;

use num_integer::Integer;
use num_rational::Rational64;

use crate::combinatorics::{binom_condition, binom_usize, subsets};
use crate::error::{GcError, Result};
use crate::ratio::format_ratio;
use crate::scheme::{GcScheme, Label, Row, SchemeParams};

fn check_condition(n: usize, alpha: &Rational64, s: usize, y: usize) -> Result<()> {
    if y == 0 || y > n {
        return Err(GcError::Parameter(format!("need 1 <= y <= n, got y={y}, n={n}")));
    }
    if !binom_condition(n, s, y, alpha) {
        return Err(GcError::Infeasible(format!(
            "C(s,y)/C(n,y) <= 1-alpha fails for n={n}, s={s}, y={y}, alpha={}",
            format_ratio(alpha)
        )));
    }
    Ok(())
}

/// Partitions are the y-subsets of workers in lexicographic order; partition
/// `j` goes to every worker in its subset.
fn subset_assignment(n: usize, y: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let parts: Vec<Vec<usize>> = subsets(n, y).collect();
    let mut assignment = vec![Vec::new(); n];
    for (j, set) in parts.iter().enumerate() {
        for &w in set {
            assignment[w].push(j);
        }
    }
    (parts, assignment)
}

/// Every worker sends each assigned gradient on its own.
pub fn build_combinatorial(n: usize, alpha: Rational64, s: usize, y: usize) -> Result<GcScheme> {
    check_condition(n, &alpha, s, y)?;
    let k = binom_usize(n, y).ok_or_else(|| GcError::Parameter("C(n,y) overflows".into()))?;
    let params = SchemeParams::new(n, k, alpha, s)?;
    let (_, assignment) = subset_assignment(n, y);
    let rows = assignment.iter().map(|a| a.iter().map(|&j| Row::singleton(j)).collect()).collect();
    GcScheme::new(params, Label::Combinatorial, assignment, rows)
}

fn shift(set: &[usize], by: usize, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = set.iter().map(|&e| (e + by) % n).collect();
    v.sort_unstable();
    v
}

/// Designated worker of every partition of the y-subset assignment.
///
/// Starting from the lexicographically first subsets containing worker 1,
/// greedily keep those that are not a cyclic shift of one already kept until
/// C(n-1,y-1)/y are chosen. Shifting that family by x-1 gives the subsets
/// designated to worker x.
pub fn balanced_designations(n: usize, y: usize) -> Result<Vec<usize>> {
    if n.gcd(&y) != 1 {
        return Err(GcError::Infeasible(format!("balanced scheme needs gcd(n,y) = 1, got n={n}, y={y}")));
    }
    let per_worker = binom_usize(n - 1, y - 1).ok_or_else(|| GcError::Parameter("C(n-1,y-1) overflows".into()))? / y;
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for set in subsets(n, y).filter(|s| s[0] == 0) {
        if chosen.len() == per_worker {
            break;
        }
        if seen.contains(&set) {
            continue;
        }
        for by in 0..n {
            seen.insert(shift(&set, by, n));
        }
        chosen.push(set);
    }
    let parts: Vec<Vec<usize>> = subsets(n, y).collect();
    let mut owner = vec![usize::MAX; parts.len()];
    for x in 0..n {
        for set in &chosen {
            let target = shift(set, x, n);
            let j = parts.binary_search(&target).expect("shifted subset is a y-subset");
            if owner[j] != usize::MAX {
                return Err(GcError::Infeasible(format!("subset {target:?} designated twice")));
            }
            owner[j] = x;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(GcError::Infeasible("designated sets do not cover every partition".into()));
    }
    Ok(owner)
}

/// Same assignment as the combinatorial scheme; each worker sends the sum over
/// its assignment plus singletons for the partitions not designated to it.
pub fn build_balanced(n: usize, alpha: Rational64, s: usize, y: usize) -> Result<GcScheme> {
    check_condition(n, &alpha, s, y)?;
    let owner = balanced_designations(n, y)?;
    let params = SchemeParams::new(n, owner.len(), alpha, s)?;
    let (_, assignment) = subset_assignment(n, y);
    let rows = assignment
        .iter()
        .enumerate()
        .map(|(w, a)| {
            let mut rows = vec![Row::ones(a.iter().copied())];
            rows.extend(a.iter().filter(|&&j| owner[j] != w).map(|&j| Row::singleton(j)));
            rows
        })
        .collect();
    GcScheme::new(params, Label::Balanced, assignment, rows)
}

//! Schemes between cyclic and combinatorial: partitions are indexed by
//! length-y lists of workers with prescribed minimum cyclic gaps.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Rational64;

use crate::combinatorics::{binom, binom_usize, ratio_at_most_one_minus};
use crate::error::{GcError, Result};
use crate::ratio::format_ratio;
use crate::scheme::{GcScheme, Label, Row, SchemeParams};

/// List length `y`, total gap `delta` and the per-position gaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntermediateParams {
    pub y: usize,
    pub delta: usize,
    pub gammas: Vec<usize>,
}

impl IntermediateParams {
    pub fn new(y: usize, delta: usize, gammas: Vec<usize>) -> Result<Self> {
        if y == 0 {
            return Err(GcError::Parameter("list length y must be positive".into()));
        }
        if gammas.len() != y || gammas.contains(&0) {
            return Err(GcError::Parameter(format!("need {y} positive gaps, got {gammas:?}")));
        }
        if gammas.iter().sum::<usize>() != delta {
            return Err(GcError::Parameter(format!("gaps {gammas:?} do not sum to delta={delta}")));
        }
        let p = IntermediateParams { y, delta, gammas };
        let period = y / p.t();
        if (0..y).any(|i| p.gammas[i] != p.gammas[i % period]) {
            return Err(GcError::Parameter(format!(
                "gcd(delta,y) = {} needs gaps with period {period}, got {:?}",
                p.t(),
                p.gammas
            )));
        }
        Ok(p)
    }

    /// Default gaps: within one period of length y/t, split delta/t as evenly
    /// as possible with the larger values last, then repeat t times.
    pub fn balanced(y: usize, delta: usize) -> Result<Self> {
        if y == 0 || delta < y {
            return Err(GcError::Parameter(format!("need 1 <= y <= delta, got y={y}, delta={delta}")));
        }
        let t = delta.gcd(&y);
        let (period, share) = (y / t, delta / t);
        let (q, rem) = (share / period, share % period);
        let one: Vec<usize> = (0..period).map(|i| if i >= period - rem { q + 1 } else { q }).collect();
        let gammas = one.iter().copied().cycle().take(y).collect();
        IntermediateParams::new(y, delta, gammas)
    }

    pub fn t(&self) -> usize {
        self.delta.gcd(&self.y)
    }
}

/// y·C(s−δ+y, y) / (n·C(n−δ+y−1, y−1)) ≤ 1 − α
pub fn intermediate_condition(n: usize, s: usize, alpha: &Rational64, y: usize, delta: usize) -> bool {
    if y == 0 || delta < y || delta > n + y - 1 || s + y < delta {
        return false;
    }
    let num = BigUint::from(y) * binom((s + y - delta) as u64, y as u64);
    let den = BigUint::from(n) * binom((n + y - 1 - delta) as u64, (y - 1) as u64);
    ratio_at_most_one_minus(&num, &den, alpha)
}

/// Smallest delta in [y, s] meeting [`intermediate_condition`], if any.
pub fn delta_star(n: usize, s: usize, alpha: &Rational64, y: usize) -> Option<usize> {
    (y.max(1)..=s).find(|&d| intermediate_condition(n, s, alpha, y, d))
}

fn gap_vectors(gammas: &[usize], budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = prefix.len();
    if i == gammas.len() {
        out.push(prefix.clone());
        return;
    }
    let used: usize = prefix.iter().sum();
    let rest_min: usize = gammas[i + 1..].iter().sum();
    let mut d = gammas[i];
    while used + d + rest_min <= budget {
        prefix.push(d);
        gap_vectors(gammas, budget, prefix, out);
        prefix.pop();
        d += 1;
    }
}

/// The lists naming each partition, in partition order (0-based workers).
/// Ordered by first element, then lexicographically by gaps; for t > 1 a
/// partition is named by the smallest rotation by multiples of y/t.
pub fn intermediate_lists(n: usize, ip: &IntermediateParams) -> Vec<Vec<usize>> {
    let y = ip.y;
    let mut gaps = Vec::new();
    // gaps d_1..d_{y-1}; the closing gap n − Σd must be at least γ_y
    gap_vectors(&ip.gammas[..y - 1], n.saturating_sub(ip.gammas[y - 1]), &mut Vec::new(), &mut gaps);
    let period = y / ip.t();
    let mut lists = Vec::new();
    for c1 in 0..n {
        for g in &gaps {
            let mut list = Vec::with_capacity(y);
            let mut c = c1;
            list.push(c);
            for d in g {
                c = (c + d) % n;
                list.push(c);
            }
            let canonical = (1..ip.t()).all(|j| {
                let mut rot = list[j * period..].to_vec();
                rot.extend_from_slice(&list[..j * period]);
                list <= rot
            });
            if canonical {
                lists.push(list);
            }
        }
    }
    lists
}

/// Partition [c_1..c_y] goes to W_j iff 0 <= (j − c_i mod n) < γ_i for some i;
/// every gradient is sent on its own.
pub fn build_intermediate(n: usize, alpha: Rational64, s: usize, ip: &IntermediateParams) -> Result<GcScheme> {
    if ip.delta > s {
        return Err(GcError::Parameter(format!("need delta <= s, got delta={}, s={s}", ip.delta)));
    }
    if ip.delta > n {
        return Err(GcError::Parameter(format!("need delta <= n, got delta={}", ip.delta)));
    }
    if !intermediate_condition(n, s, &alpha, ip.y, ip.delta) {
        return Err(GcError::Infeasible(format!(
            "y*C(s-delta+y,y) / (n*C(n-delta+y-1,y-1)) <= 1-alpha fails for n={n}, s={s}, y={}, delta={}, alpha={}",
            ip.y,
            ip.delta,
            format_ratio(&alpha)
        )));
    }
    let lists = intermediate_lists(n, ip);
    let expected = binom_usize(n + ip.y - 1 - ip.delta, ip.y - 1).map(|c| n * c / ip.t());
    debug_assert_eq!(Some(lists.len()), expected);
    let params = SchemeParams::new(n, lists.len(), alpha, s)?;
    let mut assignment = vec![Vec::new(); n];
    for (j, list) in lists.iter().enumerate() {
        let mut holders: Vec<usize> = list
            .iter()
            .zip(&ip.gammas)
            .flat_map(|(&c, &g)| (0..g).map(move |o| (c + o) % n))
            .collect();
        holders.sort_unstable();
        holders.dedup();
        for w in holders {
            assignment[w].push(j);
        }
    }
    let rows = assignment.iter().map(|a| a.iter().map(|&j| Row::singleton(j)).collect()).collect();
    GcScheme::new(params, Label::Intermediate, assignment, rows)
}

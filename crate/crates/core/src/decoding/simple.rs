use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{GcError, Result};
use crate::feasibility::best_recovery;
use crate::linalg::{ones, solve_left};
use crate::scheme::{GcScheme, Label};

use super::{RecoveryCertificate, StragglerSet, Term};

fn expect_label(scheme: &GcScheme, allowed: &[Label]) -> Result<()> {
    if allowed.contains(&scheme.label()) {
        Ok(())
    } else {
        Err(GcError::Parameter(format!("decoder does not handle {} schemes", scheme.label())))
    }
}

/// For schemes that send every assigned gradient alone: take each partition
/// held by a live worker once, from the lowest-indexed such worker.
pub fn decode_individual(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    expect_label(scheme, &[Label::Combinatorial, Label::Tdesign, Label::Intermediate, Label::Uncoded])?;
    let mut taken = vec![false; scheme.k()];
    let mut combo = Vec::new();
    for w in (0..scheme.n()).filter(|&w| !stragglers.contains(w)) {
        for (ri, row) in scheme.rows()[w].iter().enumerate() {
            let j = row.as_singleton().ok_or_else(|| GcError::Parameter(format!("W{} row {} is not a singleton", w + 1, ri + 1)))?;
            if !taken[j] {
                taken[j] = true;
                combo.push(Term::unit(w, ri));
            }
        }
    }
    let recovered = (0..scheme.k()).filter(|&j| taken[j]).collect();
    Ok(RecoveryCertificate { stragglers: stragglers.indices().to_vec(), recovered, combo })
}

/// Adds every live worker's full-sum message, then cancels the surplus copies
/// of partitions counted c > 1 times with c − 1 copies of one singleton.
pub fn decode_balanced(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    expect_label(scheme, &[Label::Balanced])?;
    let live: Vec<usize> = (0..scheme.n()).filter(|&w| !stragglers.contains(w)).collect();
    let mut count = vec![0usize; scheme.k()];
    let mut combo = Vec::new();
    for &w in &live {
        combo.push(Term::unit(w, 0));
        for &j in &scheme.assignment()[w] {
            count[j] += 1;
        }
    }
    for (j, &c) in count.iter().enumerate() {
        if c <= 1 {
            continue;
        }
        let (w, ri) = live
            .iter()
            .find_map(|&w| scheme.rows()[w].iter().position(|r| r.as_singleton() == Some(j)).map(|ri| (w, ri)))
            .ok_or_else(|| GcError::Decode(format!("no live singleton for D{} covered {c} times", j + 1)))?;
        combo.push(Term { worker: w, row: ri, coef: BigRational::from_integer(BigInt::from(1 - c as i64)) });
    }
    combo.sort_by_key(|t| (t.worker, t.row));
    let recovered = (0..scheme.k()).filter(|&j| count[j] > 0).collect();
    Ok(RecoveryCertificate { stragglers: stragglers.indices().to_vec(), recovered, combo })
}

/// One live replica per block. Blocks whose replicas all straggle are lost,
/// so the recovered set can fall short of the full-recovery target; callers
/// compare `recovered.len()` with `scheme.required()`.
pub fn decode_frc(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    expect_label(scheme, &[Label::Frc])?;
    let mut covered = vec![false; scheme.k()];
    let mut combo = Vec::new();
    for w in (0..scheme.n()).filter(|&w| !stragglers.contains(w)) {
        let a = &scheme.assignment()[w];
        if a.iter().all(|&j| !covered[j]) {
            for &j in a {
                covered[j] = true;
            }
            combo.push(Term::unit(w, 0));
        }
    }
    let recovered = (0..scheme.k()).filter(|&j| covered[j]).collect();
    Ok(RecoveryCertificate { stragglers: stragglers.indices().to_vec(), recovered, combo })
}

/// Solves for coefficients on the live messages that give the all-ones vector.
pub fn decode_cgc(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    expect_label(scheme, &[Label::Cgc])?;
    let k = scheme.k();
    let all: Vec<usize> = (0..k).collect();
    let (terms, rows) = live_rows(scheme, stragglers);
    let x = solve_left(&rows, &ones(k, &all))
        .ok_or_else(|| GcError::Decode(format!("live rows do not span all-ones for stragglers {:?}", stragglers.indices())))?;
    Ok(certificate(stragglers, all, terms, x))
}

/// Any scheme: finds the largest recoverable set by exhaustive span search
/// and solves for its coefficients. Exponential in k; meant for small
/// hand-built schemes.
pub fn decode_span(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    let k = scheme.k();
    let best = best_recovery(scheme, stragglers.indices());
    let (terms, rows) = live_rows(scheme, stragglers);
    let x = solve_left(&rows, &ones(k, &best)).ok_or_else(|| GcError::Decode("span search returned a vector outside the span".into()))?;
    Ok(certificate(stragglers, best, terms, x))
}

fn live_rows(scheme: &GcScheme, stragglers: &StragglerSet) -> (Vec<(usize, usize)>, Vec<Vec<BigRational>>) {
    let mut terms = Vec::new();
    let mut rows = Vec::new();
    for w in (0..scheme.n()).filter(|&w| !stragglers.contains(w)) {
        for (ri, row) in scheme.rows()[w].iter().enumerate() {
            terms.push((w, ri));
            rows.push(row.to_dense(scheme.k()));
        }
    }
    (terms, rows)
}

fn certificate(stragglers: &StragglerSet, recovered: Vec<usize>, terms: Vec<(usize, usize)>, x: Vec<BigRational>) -> RecoveryCertificate {
    let combo = terms
        .into_iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|((worker, row), coef)| Term { worker, row, coef })
        .collect();
    RecoveryCertificate { stragglers: stragglers.indices().to_vec(), recovered, combo }
}

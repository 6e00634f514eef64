//! Decoders for the cyclic schemes. Worker w holds partitions w..w+r−1
//! (mod n). Workers 0..span are split into r groups A_g = {g, g+r, ...};
//! the messages of one group have disjoint supports.

use crate::error::{GcError, Result};
use crate::scheme::{GcScheme, Label};

use super::{decode_span, RecoveryCertificate, StragglerSet, Term};

/// Walks back from the largest straggler in `0..span` while the current
/// candidate's group still has a straggler below it, jumping each time to
/// the largest straggler below the candidate. `None` when some group of
/// `0..span` has no straggler (the caller then decodes from that group).
fn stopping_straggler(span: usize, r: usize, stragglers: &StragglerSet) -> Option<usize> {
    let hit: Vec<usize> = stragglers.indices().iter().copied().filter(|&w| w < span).collect();
    if (0..r).any(|g| !hit.iter().any(|&w| w % r == g)) {
        return None;
    }
    let mut i = *hit.last()?;
    while hit.iter().any(|&w| w < i && w % r == i % r) {
        i = *hit.iter().rev().find(|&&w| w < i).expect("a smaller straggler exists");
    }
    Some(i)
}

/// Groups over the first beta workers.
pub fn stopping_straggler_1(beta: usize, r: usize, stragglers: &StragglerSet) -> Option<usize> {
    stopping_straggler(beta, r, stragglers)
}

/// Groups over the first gamma = beta − (beta mod r) workers.
pub fn stopping_straggler_2(gamma: usize, r: usize, stragglers: &StragglerSet) -> Option<usize> {
    stopping_straggler(gamma, r, stragglers)
}

/// Greedy smallest choice of `count` non-stragglers k_1 < ... with
/// k_1 >= first, k_t − k_{t−1} >= r and k_count <= last.
fn pick_spaced(first: usize, last: usize, count: usize, r: usize, stragglers: &StragglerSet) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(count);
    let mut next = first;
    for _ in 0..count {
        let k = (next..=last).find(|&w| !stragglers.contains(w))?;
        out.push(k);
        next = k + r;
    }
    Some(out)
}

fn window(n: usize, start: usize, len: usize) -> impl Iterator<Item = usize> {
    (start..start + len).map(move |j| j % n)
}

fn certificate(n: usize, r: usize, x: usize, full: &[usize], prefix: Option<usize>, stragglers: &StragglerSet) -> RecoveryCertificate {
    let mut recovered: Vec<usize> = full.iter().flat_map(|&w| window(n, w, r)).collect();
    let mut combo: Vec<Term> = full.iter().map(|&w| Term::unit(w, 0)).collect();
    if let Some(u) = prefix {
        recovered.extend(window(n, u, x));
        combo.push(Term::unit(u, 1));
    }
    combo.sort_by_key(|t| (t.worker, t.row));
    recovered.sort_unstable();
    RecoveryCertificate { stragglers: stragglers.indices().to_vec(), recovered, combo }
}

fn cyclic_shape(scheme: &GcScheme, label: Label) -> Result<(usize, usize, usize)> {
    if scheme.label() != label {
        return Err(GcError::Parameter(format!("decoder for {label} schemes got a {} scheme", scheme.label())));
    }
    let p = scheme.params();
    let r = p.r.ok_or_else(|| GcError::Parameter("cyclic scheme without positive r".into()))?;
    Ok((p.n, p.beta, r))
}

/// Sums beta/r full messages with disjoint supports.
pub fn decode_cyclic1(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    let (n, beta, r) = cyclic_shape(scheme, Label::Cyclic1)?;
    let per_group = beta / r;
    let group = |g: usize| (0..per_group).map(move |t| g + t * r);
    if let Some(g) = (0..r).find(|&g| group(g).all(|w| !stragglers.contains(w))) {
        let full: Vec<usize> = group(g).collect();
        return Ok(certificate(n, r, 0, &full, None, stragglers));
    }
    let i = stopping_straggler_1(beta, r, stragglers).expect("every group has a straggler");
    let fi = i % r;
    let mut full: Vec<usize> = group(fi).filter(|&w| w < i).collect();
    let m = per_group - full.len();
    let ks = pick_spaced(i, (n + fi).saturating_sub(r).min(n - 1), m, r, stragglers).ok_or_else(|| {
        GcError::Decode(format!(
            "no spaced workers after stopping straggler W{} for stragglers {:?}",
            i + 1,
            one_based(stragglers)
        ))
    })?;
    full.extend(ks);
    Ok(certificate(n, r, 0, &full, None, stragglers))
}

/// Two-message cyclic decoder. Runs the case analysis of
/// `decode_cyclic2_literal`; on the few straggler sets where that selection
/// rule finds nothing, falls back to the exact span decoder.
pub fn decode_cyclic2(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    match decode_cyclic2_literal(scheme, stragglers) {
        Ok(cert) => Ok(cert),
        Err(GcError::Decode(_)) => decode_span(scheme, stragglers),
        Err(e) => Err(e),
    }
}

/// Full messages plus one prefix message covering x = beta mod r partitions,
/// chosen by the stopping-straggler case analysis alone. Returns
/// `GcError::Decode` when the rule has no valid choice.
pub fn decode_cyclic2_literal(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    let (n, beta, r) = cyclic_shape(scheme, Label::Cyclic2)?;
    let x = beta % r;
    let gamma = beta - x;
    let per_group = gamma / r;
    let group = |g: usize| (0..per_group).map(move |t| g + t * r);
    let alive = |w: usize| !stragglers.contains(w % n);
    let clean: Vec<usize> = (0..r).filter(|&g| group(g).all(alive)).collect();
    let fail = |what: &str| {
        GcError::Decode(format!("{what} for stragglers {:?}", one_based(stragglers)))
    };

    if clean.is_empty() {
        let i = stopping_straggler_2(gamma, r, stragglers).expect("every group has a straggler");
        let fi = i % r;
        let mut full: Vec<usize> = group(fi).filter(|&w| w < i).collect();
        let m = per_group - full.len();
        let u = (i + 1..n).find(|&w| alive(w)).ok_or_else(|| fail("no live worker after the stopping straggler"))?;
        let last = (n + fi).saturating_sub(r).min(n - 1);
        let ks = pick_spaced(u + x, last, m, r, stragglers).ok_or_else(|| fail("no spaced workers after the prefix worker"))?;
        full.extend(ks);
        return Ok(certificate(n, r, x, &full, Some(u), stragglers));
    }

    // Case II. Relabel cyclically so the lowest clean group becomes group 0;
    // the groups, J and the prefix search are then taken in the new labels.
    let c = clean[0];
    let alive_c = |w: usize| alive(w + c);
    let clean_c: Vec<usize> = (0..r).filter(|&g| group(g).all(alive_c)).collect();
    // B_w = A_w plus the worker right after the group's span, for groups
    // w >= r − x (1-based), i.e. g + 1 >= r − x.
    let choice = match clean_c.iter().find(|&&g| g + 1 >= r - x && alive_c(g + gamma)) {
        Some(&g) => (g, g + gamma),
        None => {
            let a = *clean_c.last().expect("group 0 is clean after relabelling");
            let z = (a + gamma..=n + a - x).find(|&w| alive_c(w)).ok_or_else(|| fail("no prefix worker after the largest clean group"))?;
            (a, z)
        }
    };
    let full: Vec<usize> = group(choice.0).map(|w| (w + c) % n).collect();
    Ok(certificate(n, r, x, &full, Some((choice.1 + c) % n), stragglers))
}

fn one_based(s: &StragglerSet) -> Vec<usize> {
    s.indices().iter().map(|w| w + 1).collect()
}

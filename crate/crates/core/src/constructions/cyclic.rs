use num_rational::Rational64;

use crate::error::{GcError, Result};
use crate::scheme::{GcScheme, Label, Row, SchemeParams};

/// Partitions of worker `w` in cyclic order: D_w, D_{w+1}, ..., D_{w+r-1} (mod n).
pub fn cyclic_window(n: usize, r: usize, w: usize) -> Vec<usize> {
    (0..r).map(|o| (w + o) % n).collect()
}

/// The cyclic assignment with `r` consecutive partitions per worker.
pub fn cyclic_assignment(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0..n).map(|w| cyclic_window(n, r, w)).collect()
}

fn cyclic_r(params: &SchemeParams) -> Result<usize> {
    params.r.ok_or_else(|| {
        GcError::Infeasible(format!(
            "r = s+1+beta-n = {}+1+{}-{} is not positive",
            params.s, params.beta, params.n
        ))
    })
}

/// One all-ones message per worker; needs r | beta.
pub fn build_cyclic1(n: usize, alpha: Rational64, s: usize) -> Result<GcScheme> {
    let params = SchemeParams::new(n, n, alpha, s)?;
    let r = cyclic_r(&params)?;
    if params.beta % r != 0 {
        return Err(GcError::Infeasible(format!(
            "cyclic lower bound: a cyclic scheme sending one message per worker with r = {r} \
             partitions per worker cannot be ({alpha},{s})-feasible unless r divides beta = {}",
            params.beta
        )));
    }
    let assignment = cyclic_assignment(n, r);
    let rows = assignment.iter().map(|a| vec![Row::ones(a.iter().copied())]).collect();
    GcScheme::new(params, Label::Cyclic1, assignment, rows)
}

/// Two messages per worker: the full sum and the sum of its first x = beta mod r
/// partitions. Needs r - x <= n - beta.
pub fn build_cyclic2(n: usize, alpha: Rational64, s: usize) -> Result<GcScheme> {
    let params = SchemeParams::new(n, n, alpha, s)?;
    let r = cyclic_r(&params)?;
    let beta = params.beta;
    let x = beta % r;
    if x == 0 {
        return Err(GcError::Parameter(format!(
            "r = {r} divides beta = {beta}; the one-message cyclic scheme applies"
        )));
    }
    if r - x > n - beta {
        return Err(GcError::Infeasible(format!(
            "two-message cyclic scheme needs r - (beta mod r) <= n - beta, got {} > {}",
            r - x,
            n - beta
        )));
    }
    let windows: Vec<Vec<usize>> = (0..n).map(|w| cyclic_window(n, r, w)).collect();
    let rows = windows
        .iter()
        .map(|win| vec![Row::ones(win.iter().copied()), Row::ones(win[..x].iter().copied())])
        .collect();
    GcScheme::new(params, Label::Cyclic2, windows, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::load_report;

    #[test]
    fn seven_workers_one_message() {
        let s = build_cyclic1(7, Rational64::new(6, 7), 3).unwrap();
        let rep = load_report(&s).unwrap();
        assert_eq!((rep.m, rep.l), (1, Rational64::new(3, 7)));
        assert_eq!(s.assignment()[6], vec![0, 1, 6]);
    }

    #[test]
    fn full_recovery_special_case() {
        let s = build_cyclic1(4, Rational64::from_integer(1), 1).unwrap();
        assert_eq!(load_report(&s).unwrap().l, Rational64::new(2, 4));
    }

    #[test]
    fn nine_workers_needs_two_messages() {
        let err = build_cyclic1(9, Rational64::new(7, 9), 4).unwrap_err();
        assert!(err.to_string().contains("cyclic lower bound"));
        let s = build_cyclic2(9, Rational64::new(7, 9), 4).unwrap();
        let rep = load_report(&s).unwrap();
        assert_eq!((rep.m, rep.l), (2, Rational64::new(3, 9)));
        assert_eq!(s.rows()[0][1], Row::singleton(0));
        // wrap-around worker: W8 holds D8, D9, D1 and its prefix is D8
        assert_eq!(s.rows()[7][1], Row::singleton(7));
    }

    #[test]
    fn divisible_case_routed_to_one_message() {
        assert!(matches!(build_cyclic2(18, Rational64::new(15, 18), 7), Err(GcError::Parameter(_))));
        assert!(build_cyclic1(18, Rational64::new(15, 18), 7).is_ok());
    }
}

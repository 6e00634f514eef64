//! Exact Gaussian elimination over the rationals.
//!
//! Pivoting is lexicographic: columns are scanned left to right and the first
//! remaining row with a nonzero entry in that column becomes the pivot. The
//! results are therefore a deterministic function of the input order.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

/// Reduced row echelon form of a set of row vectors.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    width: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn new(mut rows: Vec<Vec<Q>>, width: usize) -> Self {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..width {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = rows[rank][col].recip();
            for v in rows[rank].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == rank || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        RowEchelon { width, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Membership in the row space. A vector of the span is fixed by its
    /// pivot coordinates, so this is one pass over the basis.
    pub fn contains(&self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut rest: Vec<Q> = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = rest[p].clone();
            if f.is_zero() {
                continue;
            }
            for (r, x) in rest.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= &f * x;
                }
            }
        }
        rest.iter().all(Zero::is_zero)
    }
}

/// Finds `x` with `sum_i x_i * rows[i] == target`, or `None` if the target is
/// outside the span. Free unknowns are set to zero.
pub fn solve_left(rows: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let unknowns = rows.len();
    let width = target.len();
    // One equation per coordinate: sum_i x_i rows[i][c] = target[c].
    let mut eqs: Vec<Vec<Q>> = (0..width)
        .map(|c| {
            let mut e: Vec<Q> = rows.iter().map(|r| r[c].clone()).collect();
            e.push(target[c].clone());
            e
        })
        .filter(|e| !e.iter().all(Zero::is_zero))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(p) = (rank..eqs.len()).find(|&i| !eqs[i][col].is_zero()) else {
            continue;
        };
        eqs.swap(rank, p);
        let inv = eqs[rank][col].recip();
        for v in eqs[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_eq = eqs[rank].clone();
        for (i, e) in eqs.iter_mut().enumerate() {
            if i == rank || e[col].is_zero() {
                continue;
            }
            let f = e[col].clone();
            for (v, pv) in e.iter_mut().zip(&pivot_eq) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    // Any remaining equation reads 0 = rhs.
    if eqs[rank..].iter().any(|e| !e[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); unknowns];
    for (e, &p) in eqs.iter().zip(&pivots) {
        x[p] = e[unknowns].clone();
    }
    Some(x)
}

pub fn ones(width: usize, support: &[usize]) -> Vec<Q> {
    let mut v = vec![Q::zero(); width];
    for &j in support {
        v[j] = Q::one();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(v: i64) -> Q {
        Q::from_integer(BigInt::from(v))
    }

    fn qrow(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_and_membership() {
        let rows = vec![qrow(&[1, 1, 0]), qrow(&[0, 1, 1]), qrow(&[1, 2, 1])];
        let e = RowEchelon::new(rows, 3);
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&qrow(&[1, 0, -1])));
        assert!(!e.contains(&qrow(&[1, 0, 0])));
    }

    #[test]
    fn solves_for_all_ones() {
        let rows = vec![qrow(&[1, 1, 0]), qrow(&[0, 0, 1]), qrow(&[0, 1, 1])];
        let x = solve_left(&rows, &qrow(&[1, 1, 1])).unwrap();
        let mut acc = vec![q(0); 3];
        for (xi, r) in x.iter().zip(&rows) {
            for (a, v) in acc.iter_mut().zip(r) {
                *a += xi * v;
            }
        }
        assert_eq!(acc, qrow(&[1, 1, 1]));
        assert!(solve_left(&rows[..1], &qrow(&[1, 1, 1])).is_none());
    }

    proptest! {
        #[test]
        fn solution_reproduces_target(
            coeffs in proptest::collection::vec(-3i64..4, 4),
            entries in proptest::collection::vec(-2i64..3, 20),
        ) {
            let rows: Vec<Vec<Q>> = entries.chunks(5).map(qrow).collect();
            let mut target = vec![q(0); 5];
            for (c, r) in coeffs.iter().zip(&rows) {
                for (t, v) in target.iter_mut().zip(r) {
                    *t += q(*c) * v;
                }
            }
            let x = solve_left(&rows, &target).expect("target lies in the span");
            let mut acc = vec![q(0); 5];
            for (xi, r) in x.iter().zip(&rows) {
                for (a, v) in acc.iter_mut().zip(r) {
                    *a += xi * v;
                }
            }
            prop_assert_eq!(&acc, &target);
            prop_assert!(RowEchelon::new(rows, 5).contains(&target));
        }
    }
}

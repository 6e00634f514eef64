use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binom_usize, subsets};
use crate::constructions::cyclic_window;
use crate::error::{GcError, Result};
use crate::linalg::{ones, RowEchelon, Q};
use crate::scheme::{GcScheme, Label, Row, SchemeParams};

/// One partition per worker; the master keeps whatever the fastest n−s send.
pub fn build_uncoded_forget_s(n: usize, s: usize) -> Result<GcScheme> {
    let alpha = Rational64::new((n - s.min(n)) as i64, n as i64);
    let params = SchemeParams::new(n, n, alpha, s)?;
    let assignment: Vec<Vec<usize>> = (0..n).map(|w| vec![w]).collect();
    let rows = (0..n).map(|w| vec![Row::singleton(w)]).collect();
    GcScheme::new(params, Label::Uncoded, assignment, rows)
}

/// Replication factor of the fractional repetition code: the real-valued
/// rule max{1, log(n log(n/s)) / log(n/s)}, rounded up to the nearest
/// divisor of n.
pub fn frc_group_count(n: usize, s: usize) -> Result<usize> {
    if s == 0 {
        return Ok(1);
    }
    if s >= n {
        return Err(GcError::Parameter(format!("need s < n, got s={s}, n={n}")));
    }
    let ratio = (n as f64 / s as f64).ln();
    let raw = ((n as f64 * ratio).ln() / ratio).max(1.0);
    let lo = raw.ceil() as usize;
    (lo.max(1)..=n)
        .find(|d| n % d == 0)
        .ok_or_else(|| GcError::Infeasible(format!("no divisor of n={n} is at least {raw:.3}")))
}

/// d replica groups. Worker w belongs to group w mod d and holds block
/// floor(w/d), i.e. partitions d·floor(w/d) .. d·floor(w/d)+d−1, so the d
/// replicas of a block are consecutive workers. One summed message each.
///
/// The nominal target is full recovery (alpha = 1); rounds where a whole
/// block of replicas straggles fall short and the decoder reports it.
pub fn build_frc(n: usize, s: usize) -> Result<GcScheme> {
    let d = frc_group_count(n, s)?;
    let params = SchemeParams::new(n, n, Rational64::one(), s)?;
    let assignment: Vec<Vec<usize>> = (0..n).map(|w| ((w / d) * d..(w / d) * d + d).collect()).collect();
    let rows = assignment.iter().map(|a| vec![Row::ones(a.iter().copied())]).collect();
    GcScheme::new(params, Label::Frc, assignment, rows)
}

/// Exhaustive spanning check is run when there are at most this many
/// straggler sets.
const CGC_VERIFY_LIMIT: usize = 20_000;

/// Full-recovery cyclic code with s+1 partitions per worker.
///
/// Codewords are evaluations (f(0), ..., f(n−1)) of polynomials of degree
/// below n−s. Worker w sends the one with f vanishing on every partition
/// outside its window W_w, namely f_w(x) = ∏_{k∉W_w} (x − k), scaled to
/// coprime integers. The all-ones vector is the constant polynomial, so it
/// lies in the span once the live rows span the whole code. The spanning
/// property is checked exhaustively when that is cheap, on seeded random
/// straggler sets otherwise.
pub fn build_cgc_full(n: usize, s: usize) -> Result<GcScheme> {
    let params = SchemeParams::new(n, n, Rational64::one(), s)?;
    let assignment: Vec<Vec<usize>> = (0..n).map(|w| cyclic_window(n, s + 1, w)).collect();
    let rows = assignment
        .iter()
        .map(|win| {
            let coefs: Vec<BigRational> = win
                .iter()
                .map(|&j| {
                    let prod = (0..n)
                        .filter(|k| !win.contains(k))
                        .fold(BigInt::one(), |acc, k| acc * BigInt::from(j as i64 - k as i64));
                    BigRational::from_integer(prod)
                })
                .collect();
            vec![Row::new(win.iter().copied().zip(integer_scaled(&coefs)).collect())]
        })
        .collect();
    let scheme = GcScheme::new(params, Label::Cgc, assignment, rows)?;
    if !spans_all_ones(&scheme) {
        return Err(GcError::Infeasible(format!("full-recovery rows do not span for n={n}, s={s}")));
    }
    Ok(scheme)
}

/// Multiplies by the lcm of denominators and divides by the gcd of the
/// numerators, keeping the sign of the leading entry positive.
fn integer_scaled(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints[0].is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

const MERSENNE_61: u64 = (1 << 61) - 1;
/// Random straggler sets checked when exhaustive checking is too costly.
const CGC_SAMPLES: usize = 64;
const CGC_SAMPLE_SEED: u64 = 0x6367_6300;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, MERSENNE_61 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

/// Rank over GF(2^61 − 1). Never exceeds the rank over the rationals.
fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, p);
        let inv = inv_mod(rows[rank][c]);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c] != 0 {
                let f = mul_mod(row[c], inv);
                for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                    *x = (*x + MERSENNE_61 - mul_mod(f, *y)) % MERSENNE_61;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every row lies in a code of dimension n−s that contains the all-ones
/// vector, so n−s independent live rows suffice; independence is settled
/// modulo a prime first and exactly only if that is inconclusive.
fn spans_all_ones(scheme: &GcScheme) -> bool {
    let (n, s, k) = (scheme.n(), scheme.s(), scheme.k());
    let modp = |c: &BigInt| -> u64 {
        let r = (c % BigInt::from(MERSENNE_61)).to_i64().expect("reduced below 2^61");
        (if r < 0 { r + MERSENNE_61 as i64 } else { r }) as u64
    };
    let dense: Vec<Vec<u64>> = scheme
        .rows()
        .iter()
        .map(|r| {
            let mut v = vec![0u64; k];
            for (j, c) in r[0].entries() {
                v[*j] = modp(c);
            }
            v
        })
        .collect();
    let all: Vec<usize> = (0..k).collect();
    let target = ones(k, &all);
    let check = |stragglers: &[usize]| {
        let live = (0..n).filter(|w| !stragglers.contains(w));
        if rank_mod_p(live.clone().map(|w| dense[w].clone()).collect()) == n - s {
            return true;
        }
        let rows: Vec<Vec<Q>> = live.map(|w| scheme.rows()[w][0].to_dense(k)).collect();
        RowEchelon::new(rows, k).contains(&target)
    };
    match binom_usize(n, s) {
        Some(c) if c <= CGC_VERIFY_LIMIT => subsets(n, s).all(|st| check(&st)),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(CGC_SAMPLE_SEED);
            (0..CGC_SAMPLES).all(|_| check(&rand::seq::index::sample(&mut rng, n, s).into_vec()))
        }
    }
}

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::combinatorics::{binom, subsets};
use crate::error::{GcError, Result};
use crate::scheme::{GcScheme, Label, Row, SchemeParams};

/// A t-(v, p, lambda) design: p-subsets (blocks) of v points such that every
/// t-subset of points lies in exactly lambda blocks. Points are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDesign {
    pub t: usize,
    pub v: usize,
    pub p: usize,
    pub lambda: usize,
    pub blocks: Vec<Vec<usize>>,
}

const HADAMARD_3_8_4_1: [[usize; 4]; 14] = [
    [1, 2, 5, 6],
    [3, 4, 7, 8],
    [1, 3, 5, 7],
    [2, 4, 6, 8],
    [1, 4, 5, 8],
    [2, 3, 6, 7],
    [1, 2, 3, 4],
    [5, 6, 7, 8],
    [1, 2, 7, 8],
    [3, 4, 5, 6],
    [1, 3, 6, 8],
    [2, 4, 5, 7],
    [1, 4, 6, 7],
    [2, 3, 5, 8],
];

impl TDesign {
    /// Checks every invariant, including the exhaustive t-subset count.
    pub fn new(t: usize, v: usize, p: usize, lambda: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if t == 0 || t > p || p > v {
            return Err(GcError::Design(format!("need 1 <= t <= p <= v, got t={t}, p={p}, v={v}")));
        }
        for (i, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            b.dedup();
            if b.len() != p || b.iter().any(|&x| x >= v) {
                return Err(GcError::Design(format!("block {} is not a {p}-subset of the {v} points", i + 1)));
            }
        }
        // lambda = |B| C(p,t) / C(v,t)
        let lhs = BigUint::from(lambda) * binom(v as u64, t as u64);
        let rhs = BigUint::from(blocks.len()) * binom(p as u64, t as u64);
        if lhs != rhs {
            return Err(GcError::Design(format!(
                "lambda={lambda} inconsistent with {} blocks (need lambda*C(v,t) = |B|*C(p,t))",
                blocks.len()
            )));
        }
        for subset in subsets(v, t) {
            let hits = blocks.iter().filter(|b| subset.iter().all(|x| b.binary_search(x).is_ok())).count();
            if hits != lambda {
                let shown: Vec<usize> = subset.iter().map(|x| x + 1).collect();
                return Err(GcError::Design(format!(
                    "t-subset {shown:?} lies in {hits} blocks, expected {lambda}"
                )));
            }
        }
        Ok(TDesign { t, v, p, lambda, blocks })
    }

    /// The 3-(8,4,1) design from the Hadamard matrix of order 8, blocks in
    /// the order that fixes partition numbering.
    pub fn hadamard_3_8_4_1() -> Self {
        let blocks = HADAMARD_3_8_4_1.iter().map(|b| b.iter().map(|x| x - 1).collect()).collect();
        TDesign::new(3, 8, 4, 1, blocks).expect("built-in design is valid")
    }

    /// Resolves a built-in name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "hadamard-3-8-4-1" | "hadamard" => Some(TDesign::hadamard_3_8_4_1()),
            _ => None,
        }
    }

    /// Header line `t v p lambda`, then one block per line of 1-based points.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let nums = |line: &str| -> Result<Vec<usize>> {
            line.split_whitespace()
                .map(|tok| tok.parse::<usize>().map_err(|_| GcError::Parse(format!("bad integer {tok:?} in design file"))))
                .collect()
        };
        let header = nums(lines.next().ok_or_else(|| GcError::Parse("empty design file".into()))?)?;
        let [t, v, p, lambda] = header[..] else {
            return Err(GcError::Parse("design header must be `t v p lambda`".into()));
        };
        let mut blocks = Vec::new();
        for line in lines {
            let pts = nums(line)?;
            if pts.contains(&0) {
                return Err(GcError::Parse("design points are 1-based".into()));
            }
            blocks.push(pts.into_iter().map(|x| x - 1).collect());
        }
        TDesign::new(t, v, p, lambda, blocks)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.t, self.v, self.p, self.lambda);
        for b in &self.blocks {
            let pts: Vec<String> = b.iter().map(|x| (x + 1).to_string()).collect();
            out.push_str(&pts.join(" "));
            out.push('\n');
        }
        out
    }

    /// 1 − C(v−t,p)/C(v,p)
    pub fn alpha(&self) -> Rational64 {
        let num = binom((self.v - self.t) as u64, self.p as u64).to_i64().expect("small design");
        let den = binom(self.v as u64, self.p as u64).to_i64().expect("small design");
        Rational64::from_integer(1) - Rational64::new(num, den)
    }
}

/// Workers are the points, partitions the blocks; every gradient is sent on
/// its own. The result tolerates s = v − t stragglers.
pub fn build_from_tdesign(design: &TDesign) -> Result<GcScheme> {
    let n = design.v;
    let s = design.v - design.t;
    let params = SchemeParams::new(n, design.blocks.len(), design.alpha(), s)?;
    let mut assignment = vec![Vec::new(); n];
    for (j, b) in design.blocks.iter().enumerate() {
        for &w in b {
            assignment[w].push(j);
        }
    }
    let rows = assignment.iter().map(|a| a.iter().map(|&j| Row::singleton(j)).collect()).collect();
    GcScheme::new(params, Label::Tdesign, assignment, rows)
}

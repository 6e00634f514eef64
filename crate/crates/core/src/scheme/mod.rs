//! Data model of a gradient code: which partitions each worker holds and
//! which linear combinations of their partial gradients it sends back.
//!
//! Indices are 0-based in memory and 1-based in every serialized or rendered
//! form.

mod json;
mod render;

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GcError, Result};
use crate::ratio::{ceil_times, check_alpha, format_ratio};

pub use render::{parse_rendered, render_table, RenderStyle};

/// Size and recovery target of a scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    pub n: usize,
    pub k: usize,
    pub alpha: Rational64,
    pub s: usize,
    /// ⌈alpha·n⌉
    pub beta: usize,
    /// s+1+beta−n when positive; only meaningful for the cyclic family.
    pub r: Option<usize>,
}

impl SchemeParams {
    /// `s = 0` is accepted (full-recovery baselines without stragglers).
    pub fn new(n: usize, k: usize, alpha: Rational64, s: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(GcError::Parameter(format!("need n >= 1 and k >= 1, got n={n}, k={k}")));
        }
        check_alpha(&alpha)?;
        if s >= n {
            return Err(GcError::Parameter(format!("need s < n, got s={s}, n={n}")));
        }
        let beta = ceil_times(&alpha, n);
        let r = (s + 1 + beta).checked_sub(n).filter(|&r| r > 0);
        Ok(SchemeParams { n, k, alpha, s, beta, r })
    }

    /// Minimum number of partitions whose gradient sum must be recovered.
    pub fn required(&self) -> usize {
        ceil_times(&self.alpha, self.k)
    }
}

/// Which construction produced a scheme. `Custom` marks hand-built or
/// user-supplied schemes that only the generic span decoder can handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Cyclic1,
    Cyclic2,
    Combinatorial,
    Balanced,
    Tdesign,
    Intermediate,
    Uncoded,
    Frc,
    Cgc,
    Custom,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

/// One transmitted message: a sparse integer combination of partial gradients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    entries: Vec<(usize, BigInt)>,
}

impl Row {
    /// Sorts by index, merges repeated indices and drops zero coefficients.
    pub fn new(mut entries: Vec<(usize, BigInt)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(entries.len());
        for (j, c) in entries {
            match out.last_mut() {
                Some(last) if last.0 == j => last.1 += c,
                _ => out.push((j, c)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        Row { entries: out }
    }

    pub fn ones<I: IntoIterator<Item = usize>>(support: I) -> Self {
        Row::new(support.into_iter().map(|j| (j, BigInt::one())).collect())
    }

    pub fn singleton(j: usize) -> Self {
        Row { entries: vec![(j, BigInt::one())] }
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The single partition this row carries, if it is a unit singleton.
    pub fn as_singleton(&self) -> Option<usize> {
        match self.entries.as_slice() {
            [(j, c)] if c.is_one() => Some(*j),
            _ => None,
        }
    }

    pub fn to_dense(&self, k: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); k];
        for (j, c) in &self.entries {
            v[*j] = BigRational::from_integer(c.clone());
        }
        v
    }
}

/// A complete gradient code. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcScheme {
    params: SchemeParams,
    label: Label,
    assignment: Vec<Vec<usize>>,
    rows: Vec<Vec<Row>>,
}

/// One broken invariant, worded for humans (1-based indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WorkerCount { field: &'static str, got: usize, n: usize },
    PartitionOutOfRange { worker: usize, partition: usize, k: usize },
    SupportOutsideAssignment { worker: usize, row: usize, partition: usize },
    UncoveredAssignment { worker: usize, partition: usize },
    NonUniformRows { worker: usize, rows: usize, expected: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::WorkerCount { field, got, n } => {
                write!(f, "{field} lists {got} workers, expected n={n}")
            }
            Violation::PartitionOutOfRange { worker, partition, k } => {
                write!(f, "worker W{} references D{} but k={k}", worker + 1, partition + 1)
            }
            Violation::SupportOutsideAssignment { worker, row, partition } => write!(
                f,
                "worker W{} row {} uses D{} which is not assigned to it",
                worker + 1,
                row + 1,
                partition + 1
            ),
            Violation::UncoveredAssignment { worker, partition } => write!(
                f,
                "worker W{} is assigned D{} but no row uses it",
                worker + 1,
                partition + 1
            ),
            Violation::NonUniformRows { worker, rows, expected } => write!(
                f,
                "worker W{} sends {rows} rows, other workers send {expected}",
                worker + 1
            ),
        }
    }
}

impl GcScheme {
    /// Builds and validates.
    pub fn new(params: SchemeParams, label: Label, assignment: Vec<Vec<usize>>, rows: Vec<Vec<Row>>) -> Result<Self> {
        let scheme = GcScheme::new_unchecked(params, label, assignment, rows);
        let violations = scheme.validate();
        if violations.is_empty() {
            Ok(scheme)
        } else {
            Err(GcError::Structural(violations.iter().map(|v| v.to_string()).collect()))
        }
    }

    /// Builds without checking invariants; assignments are sorted and deduplicated.
    pub fn new_unchecked(params: SchemeParams, label: Label, mut assignment: Vec<Vec<usize>>, rows: Vec<Vec<Row>>) -> Self {
        for a in assignment.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        GcScheme { params, label, assignment, rows }
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn s(&self) -> usize {
        self.params.s
    }

    pub fn alpha(&self) -> Rational64 {
        self.params.alpha
    }

    pub fn required(&self) -> usize {
        self.params.required()
    }

    pub fn assignment(&self) -> &[Vec<usize>] {
        &self.assignment
    }

    pub fn rows(&self) -> &[Vec<Row>] {
        &self.rows
    }

    pub fn row(&self, worker: usize, row: usize) -> Option<&Row> {
        self.rows.get(worker)?.get(row)
    }

    /// Rows per worker (taken from W1; uniform in valid schemes).
    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Empty iff every invariant holds.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.params.n;
        let k = self.params.k;
        let mut out = Vec::new();
        if self.assignment.len() != n {
            out.push(Violation::WorkerCount { field: "assignment", got: self.assignment.len(), n });
        }
        if self.rows.len() != n {
            out.push(Violation::WorkerCount { field: "rows", got: self.rows.len(), n });
        }
        if !out.is_empty() {
            return out;
        }
        let expected = self.m();
        for (w, (assigned, rows)) in self.assignment.iter().zip(&self.rows).enumerate() {
            for &j in assigned {
                if j >= k {
                    out.push(Violation::PartitionOutOfRange { worker: w, partition: j, k });
                }
            }
            let mut covered = vec![false; assigned.len()];
            for (ri, row) in rows.iter().enumerate() {
                for j in row.support() {
                    match assigned.binary_search(&j) {
                        Ok(pos) => covered[pos] = true,
                        Err(_) if j >= k => {
                            out.push(Violation::PartitionOutOfRange { worker: w, partition: j, k })
                        }
                        Err(_) => out.push(Violation::SupportOutsideAssignment { worker: w, row: ri, partition: j }),
                    }
                }
            }
            for (pos, c) in covered.iter().enumerate() {
                if !c {
                    out.push(Violation::UncoveredAssignment { worker: w, partition: assigned[pos] });
                }
            }
            if rows.len() != expected {
                out.push(Violation::NonUniformRows { worker: w, rows: rows.len(), expected });
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        json::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        json::from_json(text)
    }
}

/// Communication and computation loads of a scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub m: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub l: Rational64,
    pub y_per_partition: Vec<usize>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// Exact (m, l) and the replication count of every partition.
pub fn load_report(scheme: &GcScheme) -> Result<LoadReport> {
    let violations = scheme.validate();
    if !violations.is_empty() {
        return Err(GcError::Structural(violations.iter().map(|v| v.to_string()).collect()));
    }
    let k = scheme.k();
    let max = scheme.assignment.iter().map(Vec::len).max().unwrap_or(0);
    let mut y = vec![0; k];
    for a in &scheme.assignment {
        for &j in a {
            y[j] += 1;
        }
    }
    Ok(LoadReport { m: scheme.m(), l: Rational64::new(max as i64, k as i64), y_per_partition: y })
}

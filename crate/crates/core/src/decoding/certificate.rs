use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GcError, Result};
use crate::ratio::{format_big, parse_big};
use crate::scheme::GcScheme;

/// Coefficient applied to message `row` of `worker`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub worker: usize,
    pub row: usize,
    pub coef: BigRational,
}

impl Term {
    pub fn unit(worker: usize, row: usize) -> Self {
        Term { worker, row, coef: BigRational::one() }
    }
}

/// Proof that the master can form the sum of the gradients in `recovered`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryCertificate {
    pub stragglers: Vec<usize>,
    pub recovered: Vec<usize>,
    pub combo: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    stragglers: Vec<usize>,
    recovered: Vec<usize>,
    combo: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    worker: usize,
    row: usize,
    coef: String,
}

impl RecoveryCertificate {
    /// Σ coef·row as a dense vector over the k partitions.
    pub fn fold(&self, scheme: &GcScheme) -> Result<Vec<BigRational>> {
        let mut acc = vec![BigRational::zero(); scheme.k()];
        for t in &self.combo {
            let row = scheme.row(t.worker, t.row).ok_or_else(|| {
                GcError::Decode(format!("certificate names missing row {} of W{}", t.row + 1, t.worker + 1))
            })?;
            for (j, c) in row.entries() {
                acc[*j] += &t.coef * BigRational::from_integer(c.clone());
            }
        }
        Ok(acc)
    }

    /// Exact soundness check: the combination equals the indicator of
    /// `recovered` and uses no straggler.
    pub fn verify(&self, scheme: &GcScheme) -> Result<()> {
        if let Some(t) = self.combo.iter().find(|t| self.stragglers.contains(&t.worker)) {
            return Err(GcError::Decode(format!("certificate uses straggler W{}", t.worker + 1)));
        }
        let acc = self.fold(scheme)?;
        let mut want = vec![false; scheme.k()];
        for &j in &self.recovered {
            if j >= scheme.k() {
                return Err(GcError::Decode(format!("recovered index D{} out of range", j + 1)));
            }
            want[j] = true;
        }
        for (j, (v, w)) in acc.iter().zip(&want).enumerate() {
            let expect = if *w { BigRational::one() } else { BigRational::zero() };
            if *v != expect {
                return Err(GcError::Decode(format!("D{} gets coefficient {} instead of {}", j + 1, format_big(v), expect)));
            }
        }
        let mut sorted = self.recovered.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.recovered.len() {
            return Err(GcError::Decode("recovered set lists a partition twice".into()));
        }
        Ok(())
    }

    pub fn meets_target(&self, scheme: &GcScheme) -> bool {
        self.recovered.len() >= scheme.required()
    }

    /// Workers whose messages are combined, ascending.
    pub fn workers(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.combo.iter().map(|t| t.worker).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn to_json(&self) -> String {
        let doc = CertJson {
            stragglers: self.stragglers.iter().map(|w| w + 1).collect(),
            recovered: self.recovered.iter().map(|j| j + 1).collect(),
            combo: self
                .combo
                .iter()
                .map(|t| TermJson { worker: t.worker + 1, row: t.row + 1, coef: format_big(&t.coef) })
                .collect(),
        };
        serde_json::to_string(&doc).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CertJson = serde_json::from_str(text)?;
        let dec = |v: usize| v.checked_sub(1).ok_or_else(|| GcError::Parse("indices are 1-based".into()));
        Ok(RecoveryCertificate {
            stragglers: doc.stragglers.into_iter().map(dec).collect::<Result<_>>()?,
            recovered: doc.recovered.into_iter().map(dec).collect::<Result<_>>()?,
            combo: doc
                .combo
                .into_iter()
                .map(|t| Ok(Term { worker: dec(t.worker)?, row: dec(t.row)?, coef: parse_big(&t.coef)? }))
                .collect::<Result<_>>()?,
        })
    }
}

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{GcScheme, Label, Row, SchemeParams};
use crate::error::{GcError, Result};
use crate::ratio::{format_ratio, parse_ratio};

#[derive(Serialize, Deserialize)]
struct SchemeJson {
    label: Label,
    n: usize,
    k: usize,
    alpha: String,
    s: usize,
    assignment: Vec<Vec<usize>>,
    rows: Vec<Vec<Vec<EntryJson>>>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    idx: usize,
    coef: Coef,
}

/// Integers that fit in an `i64` are plain JSON numbers; larger ones (only
/// produced by full-recovery codes at large n) travel as decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coef {
    Small(i64),
    Big(String),
}

pub(super) fn to_json(scheme: &GcScheme) -> String {
    let doc = SchemeJson {
        label: scheme.label,
        n: scheme.n(),
        k: scheme.k(),
        alpha: format_ratio(&scheme.alpha()),
        s: scheme.s(),
        assignment: scheme.assignment.iter().map(|a| a.iter().map(|j| j + 1).collect()).collect(),
        rows: scheme
            .rows
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| {
                        row.entries()
                            .iter()
                            .map(|(j, c)| EntryJson {
                                idx: j + 1,
                                coef: match c.to_i64() {
                                    Some(v) => Coef::Small(v),
                                    None => Coef::Big(c.to_string()),
                                },
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("scheme serializes")
}

pub(super) fn from_json(text: &str) -> Result<GcScheme> {
    let doc: SchemeJson = serde_json::from_str(text)?;
    let one_based = |i: usize| {
        i.checked_sub(1)
            .ok_or_else(|| GcError::Parse("indices are 1-based; found 0".into()))
    };
    let params = SchemeParams::new(doc.n, doc.k, parse_ratio(&doc.alpha)?, doc.s)?;
    let assignment = doc
        .assignment
        .iter()
        .map(|a| a.iter().map(|&j| one_based(j)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(doc.rows.len());
    for worker in doc.rows {
        let mut out = Vec::with_capacity(worker.len());
        for row in worker {
            let mut entries = Vec::with_capacity(row.len());
            for e in row {
                let c = match e.coef {
                    Coef::Small(v) => BigInt::from(v),
                    Coef::Big(s) => s
                        .parse()
                        .map_err(|_| GcError::Parse(format!("bad coefficient {s:?}")))?,
                };
                entries.push((one_based(e.idx)?, c));
            }
            out.push(Row::new(entries));
        }
        rows.push(out);
    }
    Ok(GcScheme::new_unchecked(params, doc.label, assignment, rows))
}

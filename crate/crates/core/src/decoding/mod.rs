//! Turning a straggler pattern into an explicit recovery: which received
//! messages to combine, with which coefficients, and which partial-gradient
//! sum that yields.

mod certificate;
mod cyclic;
mod simple;

use crate::error::{GcError, Result};
use crate::scheme::{GcScheme, Label};

pub use certificate::{RecoveryCertificate, Term};
pub use cyclic::{decode_cyclic1, decode_cyclic2, decode_cyclic2_literal, stopping_straggler_1, stopping_straggler_2};
pub use simple::{decode_balanced, decode_cgc, decode_frc, decode_individual, decode_span};

/// Workers that fail to respond in one round (0-based, sorted, distinct).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StragglerSet {
    indices: Vec<usize>,
}

impl StragglerSet {
    /// Checks range against `n` and size against the tolerance `s`.
    pub fn new(mut indices: Vec<usize>, n: usize, s: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&w| w >= n) {
            return Err(GcError::Parameter(format!("straggler W{} out of range for n={n}", bad + 1)));
        }
        if indices.len() > s {
            return Err(GcError::Parameter(format!("{} stragglers exceed the tolerance s={s}", indices.len())));
        }
        Ok(StragglerSet { indices })
    }

    pub fn for_scheme(indices: Vec<usize>, scheme: &GcScheme) -> Result<Self> {
        StragglerSet::new(indices, scheme.n(), scheme.s())
    }

    /// From 1-based worker labels.
    pub fn from_one_based(labels: &[usize], n: usize, s: usize) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|&w| w.checked_sub(1).ok_or_else(|| GcError::Parameter("worker labels are 1-based".into())))
            .collect::<Result<Vec<_>>>()?;
        StragglerSet::new(idx, n, s)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, w: usize) -> bool {
        self.indices.binary_search(&w).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Dispatches to the decoder of the scheme's family.
pub fn decode(scheme: &GcScheme, stragglers: &StragglerSet) -> Result<RecoveryCertificate> {
    if stragglers.len() > scheme.s() || stragglers.indices().iter().any(|&w| w >= scheme.n()) {
        return Err(GcError::Parameter("straggler set does not fit the scheme".into()));
    }
    match scheme.label() {
        Label::Cyclic1 => decode_cyclic1(scheme, stragglers),
        Label::Cyclic2 => decode_cyclic2(scheme, stragglers),
        Label::Combinatorial | Label::Tdesign | Label::Intermediate | Label::Uncoded => {
            decode_individual(scheme, stragglers)
        }
        Label::Balanced => decode_balanced(scheme, stragglers),
        Label::Frc => decode_frc(scheme, stragglers),
        Label::Cgc => decode_cgc(scheme, stragglers),
        Label::Custom => decode_span(scheme, stragglers),
    }
}

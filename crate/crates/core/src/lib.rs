//! Gradient codes with partial recovery: constructions, decoders, an exact
//! feasibility oracle, delay models and a master-worker descent simulator.

pub mod combinatorics;
pub mod constructions;
pub mod decoding;
pub mod delay;
pub mod error;
pub mod feasibility;
pub mod linalg;
pub mod ratio;
pub mod scheme;
pub mod sim;

pub use decoding::{decode, RecoveryCertificate, StragglerSet, Term};
pub use delay::{DelayModel, Family, Scaling};
pub use error::{GcError, Result};
pub use feasibility::{oracle_feasible, FeasibilityVerdict, OracleMode};
pub use scheme::{load_report, GcScheme, Label, LoadReport, Row, SchemeParams, Violation};

//! Ground-truth feasibility checks: an exact span oracle over straggler sets,
//! plus the closed-form lower bounds and impossibility predicates.

mod bounds;
mod oracle;

pub use bounds::{
    check_scheme_bound, convexity_claim, impossibility_predicates, lemma_condition, lower_bound, naive_bound,
    scheme_bound_report,
    BoundReport, Impossibility, ImpossibilityVerdict,
};
pub use oracle::{best_recovery, max_recoverable, oracle_feasible, FeasibilityVerdict, OracleMode, EXHAUSTIVE_MAX_K, EXHAUSTIVE_MAX_SETS};

//! Builders for every scheme family plus the uncoded, FRC and full-recovery
//! baselines.

mod baselines;
mod combinatorial;
mod cyclic;
mod intermediate;
mod tdesign;

pub use baselines::{build_cgc_full, build_frc, build_uncoded_forget_s, frc_group_count};
pub use combinatorial::{balanced_designations, build_balanced, build_combinatorial};
pub use cyclic::{build_cyclic1, build_cyclic2, cyclic_assignment, cyclic_window};
pub use intermediate::{build_intermediate, delta_star, intermediate_condition, intermediate_lists, IntermediateParams};
pub use tdesign::{build_from_tdesign, TDesign};

//! Shared fixtures for the benchmarks.

use gradcode::constructions::*;
use gradcode::ratio::parse_ratio;
use gradcode::sim::{DatasetSpec, SimSettings};
use gradcode::{GcScheme, StragglerSet};

/// The fixed-s bundle at n = 100, s = 19.
pub fn fixed_s_schemes() -> Vec<(&'static str, GcScheme)> {
    let frac = |t: &str| parse_ratio(t).expect("fixture fraction");
    vec![
        ("forget-s", build_uncoded_forget_s(100, 19).expect("forget-s")),
        ("cyclic1", build_cyclic1(100, frac(".82"), 19).expect("cyclic1")),
        ("frc", build_frc(100, 19).expect("frc")),
        ("cgc", build_cgc_full(100, 19).expect("cgc")),
    ]
}

/// Small schemes from the worked examples.
pub fn small_schemes() -> Vec<(&'static str, GcScheme)> {
    let frac = |t: &str| parse_ratio(t).expect("fixture fraction");
    vec![
        ("cyclic1(7)", build_cyclic1(7, frac("6/7"), 3).expect("cyclic1")),
        ("cyclic2(9)", build_cyclic2(9, frac("7/9"), 4).expect("cyclic2")),
        ("combinatorial(7)", build_combinatorial(7, frac("6/7"), 3, 2).expect("combinatorial")),
        ("balanced(5)", build_balanced(5, frac("7/10"), 3, 2).expect("balanced")),
        ("tdesign(8)", build_from_tdesign(&TDesign::hadamard_3_8_4_1()).expect("tdesign")),
        ("intermediate(5)", build_intermediate(5, frac("13/15"), 3, &IntermediateParams::new(2, 3, vec![1, 2]).expect("gaps")).expect("intermediate")),
    ]
}

/// Every s-th worker straggles, spread over the ring.
pub fn spread_stragglers(scheme: &GcScheme) -> StragglerSet {
    let (n, s) = (scheme.n(), scheme.s());
    let picks: Vec<usize> = (0..s).map(|i| i * n / s.max(1)).collect();
    StragglerSet::for_scheme(picks, scheme).expect("valid straggler set")
}

pub fn sim_settings(iterations: usize) -> SimSettings {
    SimSettings { iterations, persistence_block: 10, dataset: DatasetSpec { points: 2000, ..DatasetSpec::default() }, ..SimSettings::default() }
}

//! Acceptance run: one PASS/FAIL line per criterion, each with its own
//! runtime limit. Exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gradcode::constructions::*;
use gradcode::feasibility::{
    check_scheme_bound, convexity_claim, impossibility_predicates, naive_bound, oracle_feasible, scheme_bound_report,
    Impossibility, OracleMode,
};
use gradcode::scheme::{parse_rendered, render_table, RenderStyle};
use gradcode::sim::{run_comparison, run_sim, CompareMode, ComparisonEntry, Dataset, DatasetSpec, SimConfig, SimSettings, StragglerPattern, Task};
use gradcode::{decode, decoding, load_report, GcScheme, Label, Row, Scaling, SchemeParams, StragglerSet};
use gradcode::DelayModel;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn q(p: i64, r: i64) -> Rational64 {
    Rational64::new(p, r)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn wrap<T>(r: gradcode::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// Reference tables: for each worker, the 1-based partitions it holds.
const INTERMEDIATE_TABLE: [&[usize]; 5] = [
    &[1, 2, 3, 6, 8, 9, 10, 11, 13],
    &[1, 4, 5, 6, 9, 11, 12, 13, 14],
    &[1, 2, 4, 7, 8, 9, 12, 14, 15],
    &[2, 3, 4, 5, 7, 10, 11, 12, 15],
    &[3, 5, 6, 7, 8, 10, 13, 14, 15],
];

const TDESIGN_TABLE: [&[usize]; 8] = [
    &[1, 3, 5, 7, 9, 11, 13],
    &[1, 4, 6, 7, 9, 12, 14],
    &[2, 3, 6, 7, 10, 11, 14],
    &[2, 4, 5, 7, 10, 12, 13],
    &[1, 3, 5, 8, 10, 12, 14],
    &[1, 4, 6, 8, 10, 11, 13],
    &[2, 3, 6, 8, 9, 12, 13],
    &[2, 4, 5, 8, 9, 11, 14],
];

// (partition, singleton sent)
const BALANCED_TABLE: [&[(usize, bool)]; 5] = [
    &[(1, false), (2, false), (3, true), (4, true)],
    &[(1, true), (5, false), (6, false), (7, true)],
    &[(2, true), (5, true), (8, false), (9, false)],
    &[(3, false), (6, true), (8, true), (10, false)],
    &[(4, false), (7, false), (9, true), (10, true)],
];

fn to_matrix(table: &[&[usize]], k: usize) -> Vec<Vec<bool>> {
    table.iter().map(|row| (1..=k).map(|j| row.contains(&j)).collect()).collect()
}

fn compare_render(name: &str, scheme: &GcScheme, want: &[Vec<bool>]) -> Result<(), String> {
    let got = parse_rendered(&render_table(scheme, RenderStyle::Plain));
    if got.as_slice() == want {
        return Ok(());
    }
    let diffs: Vec<String> = (0..want.len().max(got.len()))
        .flat_map(|w| {
            let (g, e) = (got.get(w).cloned().unwrap_or_default(), want.get(w).cloned().unwrap_or_default());
            (0..g.len().max(e.len()))
                .filter(move |&j| g.get(j) != e.get(j))
                .map(move |j| format!("W{}/D{}", w + 1, j + 1))
        })
        .take(6)
        .collect();
    Err(format!("{name} differs at {}", diffs.join(", ")))
}

fn acceptance_schemes() -> gradcode::Result<Vec<(&'static str, GcScheme)>> {
    Ok(vec![
        ("cyclic1(7,6/7,3)", build_cyclic1(7, q(6, 7), 3)?),
        ("cyclic2(9,7/9,4)", build_cyclic2(9, q(7, 9), 4)?),
        ("combinatorial(7,6/7,3,2)", build_combinatorial(7, q(6, 7), 3, 2)?),
        ("balanced(5,7/10,3,2)", build_balanced(5, q(7, 10), 3, 2)?),
        ("tdesign(8)", build_from_tdesign(&TDesign::hadamard_3_8_4_1())?),
        ("intermediate(5,13/15,3)", build_intermediate(5, q(13, 15), 3, &IntermediateParams::new(2, 3, vec![1, 2])?)?),
        ("uncoded(5,2)", build_uncoded_forget_s(5, 2)?),
        ("cgc(7,3)", build_cgc_full(7, 3)?),
    ])
}

fn criterion_1() -> Outcome {
    let (a7, a9) = (q(6, 7), q(7, 9));
    ensure(naive_bound(7, 3, a7) == q(24, 49), format!("naive bound {} != 24/49", naive_bound(7, 3, a7)))?;
    let rows = [
        ("cyclic n=7", wrap(build_cyclic1(7, a7, 3))?, 1, q(3, 7)),
        ("combinatorial n=7", wrap(build_combinatorial(7, a7, 3, 2))?, 6, q(2, 7)),
        ("cyclic n=9", wrap(build_cyclic2(9, a9, 4))?, 2, q(3, 9)),
        ("combinatorial n=9", wrap(build_combinatorial(9, a9, 4, 2))?, 8, q(2, 9)),
    ];
    for (name, scheme, m, l) in &rows {
        let rep = wrap(load_report(scheme))?;
        ensure((rep.m, rep.l) == (*m, *l), format!("{name}: (m,l) = ({}, {}), want ({m}, {l})", rep.m, rep.l))?;
    }
    Ok("naive 24/49; (1,3/7) (6,2/7) (2,1/3) (8,2/9)".into())
}

fn criterion_2() -> Outcome {
    let inter = wrap(build_intermediate(5, q(13, 15), 3, &wrap(IntermediateParams::new(2, 3, vec![1, 2]))?))?;
    compare_render("intermediate", &inter, &to_matrix(&INTERMEDIATE_TABLE, 15))?;
    let td = wrap(build_from_tdesign(&TDesign::hadamard_3_8_4_1()))?;
    compare_render("tdesign", &td, &to_matrix(&TDESIGN_TABLE, 14))?;
    let bal = wrap(build_balanced(5, q(7, 10), 3, 2))?;
    let want: Vec<Vec<bool>> =
        BALANCED_TABLE.iter().map(|row| (1..=10).map(|j| row.iter().any(|&(p, _)| p == j)).collect()).collect();
    compare_render("balanced", &bal, &want)?;
    // Markers are allowed to differ; report whether they do.
    let mut same = true;
    for (w, row) in BALANCED_TABLE.iter().enumerate() {
        let singles: Vec<usize> = bal.rows()[w].iter().filter_map(|r| r.as_singleton()).collect();
        for &(p, sent) in row.iter() {
            same &= singles.contains(&(p - 1)) == sent;
        }
    }
    Ok(format!("3 tables match cell-for-cell; balanced markers {}", if same { "also match" } else { "differ" }))
}

fn criterion_3() -> Outcome {
    let schemes = wrap(acceptance_schemes())?;
    let mut sets = 0;
    for (name, scheme) in &schemes {
        let v = wrap(oracle_feasible(scheme, scheme.alpha(), scheme.s(), OracleMode::Exhaustive))?;
        ensure(v.feasible && !v.sampled, format!("{name}: oracle says infeasible, worst set {:?}", v.worst_set))?;
        for set in (0..scheme.n()).combinations(scheme.s()) {
            let st = wrap(StragglerSet::for_scheme(set.clone(), scheme))?;
            let cert = decode(scheme, &st).map_err(|e| format!("{name} {set:?}: {e}"))?;
            cert.verify(scheme).map_err(|e| format!("{name} {set:?}: {e}"))?;
            ensure(cert.meets_target(scheme), format!("{name} {set:?}: only {} recovered", cert.recovered.len()))?;
            sets += 1;
        }
    }
    Ok(format!("{} schemes feasible; {sets} certificates verified", schemes.len()))
}

fn custom(n: usize, alpha: Rational64, s: usize, rows: Vec<Vec<(usize, i64)>>) -> gradcode::Result<GcScheme> {
    let params = SchemeParams::new(n, n, alpha, s)?;
    let assignment: Vec<Vec<usize>> = rows.iter().map(|r| r.iter().map(|&(j, _)| j).collect()).collect();
    let rows = rows.into_iter().map(|r| vec![Row::new(r.into_iter().map(|(j, c)| (j, BigInt::from(c))).collect())]).collect();
    GcScheme::new(params, Label::Custom, assignment, rows)
}

fn criterion_4() -> Outcome {
    // Cyclic (9,9,1,3/9) with all-ones rows at (7/9, 4).
    let alpha = q(7, 9);
    let windows = cyclic_assignment(9, 3);
    let ones: Vec<Vec<(usize, i64)>> = windows.iter().map(|a| a.iter().map(|&j| (j, 1)).collect()).collect();
    let cyc = wrap(custom(9, alpha, 4, ones))?;
    let v = wrap(oracle_feasible(&cyc, alpha, 4, OracleMode::Exhaustive))?;
    ensure(!v.feasible, "cyclic all-ones (9,9,1,3/9) reported feasible")?;
    let cyc_pred = impossibility_predicates(9, alpha, 4, 1, q(3, 9), true);
    ensure(cyc_pred.reasons.contains(&Impossibility::CyclicDivisibility), "cyclic lower bound predicate did not fire")?;

    // Odd beta, two partitions per worker, one message: n=9, beta=7, s=3.
    let pred = impossibility_predicates(9, alpha, 3, 1, q(2, 9), false);
    ensure(pred.reasons.contains(&Impossibility::OddBetaTwoPerWorker), "odd-beta predicate did not fire")?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd_be7a);
    let mut instances = Vec::new();
    let pairs = cyclic_assignment(9, 2);
    instances.push(pairs.iter().map(|a| a.iter().map(|&j| (j, 1)).collect::<Vec<_>>()).collect::<Vec<_>>());
    let coef = |rng: &mut ChaCha8Rng| {
        let c: i64 = rng.random_range(1..=3);
        if rng.random::<bool>() {
            c
        } else {
            -c
        }
    };
    for _ in 0..100 {
        instances.push(pairs.iter().map(|a| a.iter().map(|&j| (j, coef(&mut rng))).collect()).collect());
    }
    for _ in 0..200 {
        let rows: Vec<Vec<(usize, i64)>> = (0..9)
            .map(|_| {
                let a = rng.random_range(0..9);
                let b = rng.random_range(0..9);
                if a == b {
                    vec![(a, coef(&mut rng))]
                } else {
                    vec![(a.min(b), coef(&mut rng)), (a.max(b), coef(&mut rng))]
                }
            })
            .collect();
        instances.push(rows);
    }
    let mut checked = 0;
    for rows in instances {
        let scheme = wrap(custom(9, alpha, 3, rows))?;
        let v = wrap(oracle_feasible(&scheme, alpha, 3, OracleMode::Exhaustive))?;
        ensure(!v.feasible, format!("two-per-worker instance {checked} is feasible: {:?}", scheme.assignment()))?;
        checked += 1;
    }
    // The same targets are reachable with two messages per worker.
    let c2 = wrap(build_cyclic2(9, alpha, 3))?;
    let v = wrap(oracle_feasible(&c2, alpha, 3, OracleMode::Exhaustive))?;
    ensure(v.feasible, "cyclic2(9,7/9,3) unexpectedly infeasible")?;
    Ok(format!("cyclic all-ones infeasible; {checked} one-message instances at l=2/9 infeasible; m=2 feasible"))
}

fn criterion_5() -> Outcome {
    let (n, beta, s) = (18, 15, 7);
    let r = s + 1 + beta - n;
    let scheme = wrap(build_cyclic1(n, q(beta as i64, n as i64), s))?;
    let fixtures: [(&[usize], usize, [usize; 3]); 2] =
        [(&[15, 13, 10, 8, 4, 12, 11], 12, [2, 7, 14]), (&[14, 13, 9, 8, 6, 7, 5], 8, [3, 10, 15])];
    let mut notes = Vec::new();
    let mut failed = false;
    for (stragglers, want_i, want_workers) in fixtures {
        let set = wrap(StragglerSet::from_one_based(stragglers, n, s))?;
        let i = decoding::stopping_straggler_1(beta, r, &set).map(|i| i + 1);
        let cert = wrap(decode(&scheme, &set))?;
        wrap(cert.verify(&scheme))?;
        let workers: Vec<usize> = cert.workers().iter().map(|w| w + 1).collect();
        let ok = i == Some(want_i) && workers == want_workers;
        failed |= !ok;
        notes.push(format!("i={} workers {:?} (want i={want_i} {:?})", i.map_or("-".into(), |i| i.to_string()), workers, want_workers));
    }
    let line = notes.join("; ");
    if failed {
        Err(line)
    } else {
        Ok(line)
    }
}

fn criterion_6() -> Outcome {
    let alpha = q(87, 100);
    let got: Vec<Option<usize>> = (1..=3).map(|y| delta_star(19, 10, &alpha, y)).collect();
    ensure(got == [Some(9), Some(6), Some(3)], format!("delta* = {got:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xde17a);
    let (mut finite, mut rises, mut floor_ok, mut first) = (0, 0, true, None);
    for _ in 0..100 {
        let n = rng.random_range(5..=40);
        let s = rng.random_range(1..n);
        let den = rng.random_range(2..=100);
        let alpha = q(rng.random_range(1..den), den);
        // None means no delta works; treat as +infinity.
        let ds: Vec<usize> = (1..=s).map(|y| delta_star(n, s, &alpha, y).unwrap_or(usize::MAX)).collect();
        if !ds.windows(2).all(|w| w[1] <= w[0]) {
            rises += 1;
            first.get_or_insert(format!("n={n}, s={s}, alpha={alpha}: {:?}", &ds[..ds.len().min(6)]));
        }
        // delta >= y always, so the best possible is max(previous, y).
        floor_ok &= ds.windows(2).enumerate().all(|(i, w)| w[1] <= w[0].max(i + 2));
        finite += ds.iter().filter(|&&d| d != usize::MAX).count();
    }
    let floor = if floor_ok { "holds" } else { "fails" };
    match first {
        None => Ok(format!("[9,6,3]; 100 random triples non-increasing ({finite} finite values)")),
        Some(ex) => Err(format!(
            "[9,6,3] ok, but delta* rises with y on {rises}/100 random triples, e.g. {ex}; \
             delta*(y+1) <= max(delta*(y), y+1) {floor}"
        )),
    }
}

fn criterion_7() -> Outcome {
    let mut schemes = wrap(acceptance_schemes())?;
    schemes.push(("cyclic1(18,15/18,7)", wrap(build_cyclic1(18, q(15, 18), 7))?));
    schemes.push(("cyclic2(9,7/9,3)", wrap(build_cyclic2(9, q(7, 9), 3))?));
    schemes.push(("combinatorial(9,7/9,4,2)", wrap(build_combinatorial(9, q(7, 9), 4, 2))?));
    schemes.push(("cgc(12,4)", wrap(build_cgc_full(12, 4))?));
    for (name, scheme) in &schemes {
        ensure(check_scheme_bound(scheme), format!("{name} violates the load lower bound"))?;
    }
    for (name, scheme) in &schemes[..] {
        if name.starts_with("combinatorial(7") || name.starts_with("tdesign") {
            let rep = scheme_bound_report(scheme);
            ensure(rep.tight == Some(true), format!("{name} does not meet the bound with equality"))?;
        }
    }
    Ok(format!("{} schemes satisfy the bound; combinatorial(7,6/7,3,2) and tdesign(8) tight", schemes.len()))
}

fn criterion_8() -> Outcome {
    let sexp = wrap(DelayModel::shifted_exp(1.0, 2.0, Scaling::Data { delta: 1e-3 }))?;
    let mut notes = Vec::new();
    for (n, s) in [(50, 10), (100, 19)] {
        let exact = wrap(sexp.expected_iteration_delay(n, s, 100.0))?;
        let mc = wrap(sexp.monte_carlo(n, s, 100.0, 100_000, 11))?;
        let rel = (mc - exact).abs() / exact;
        ensure(rel < 0.01, format!("shifted-exp ({n},{s}): closed {exact:.5} vs MC {mc:.5}, rel {rel:.4}"))?;
        notes.push(format!("sexp({n},{s}) rel {rel:.2e}"));
    }
    let pareto = wrap(DelayModel::pareto(1.0, 1.5, Scaling::Data { delta: 0.0 }))?;
    for (n, s) in [(50, 10), (100, 19)] {
        let exact = wrap(pareto.expected_iteration_delay(n, s, 0.0))?;
        let mc = wrap(pareto.monte_carlo(n, s, 0.0, 1_000_000, 13))?;
        let rel = (mc - exact).abs() / exact;
        ensure(rel < 0.05, format!("pareto ({n},{s}): closed {exact:.5} vs MC {mc:.5}, rel {rel:.4}"))?;
        notes.push(format!("pareto({n},{s}) rel {rel:.2e}"));
    }
    Ok(notes.join(", "))
}

fn binom_u128(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    for case in 0..1000 {
        let len = rng.random_range(1..=25);
        let list: Vec<u64> = (0..len).map(|_| rng.random_range(0..=60)).collect();
        let r = rng.random_range(0..=8);
        ensure(convexity_claim(&list, r), format!("case {case}: claim fails for {list:?}, r={r}"))?;
        // Independent evaluation of both sides.
        let t = len as u64;
        let total: u64 = list.iter().sum();
        let a = total / t;
        let t1 = (a + 1) * t - total;
        let lhs: u128 = list.iter().map(|&x| binom_u128(x, r)).sum();
        let rhs = t1 as u128 * binom_u128(a, r) + (t - t1) as u128 * binom_u128(a + 1, r);
        ensure(lhs >= rhs, format!("case {case}: direct evaluation {lhs} < {rhs}"))?;
    }
    Ok("1000 random lists satisfy the inequality".into())
}

fn fixed_s_bundle(n: usize, s: usize) -> gradcode::Result<Vec<ComparisonEntry>> {
    let entry = |name: &str, scheme: GcScheme| ComparisonEntry { name: name.into(), scheme, delta_override: None };
    Ok(vec![
        entry("forget-s", build_uncoded_forget_s(n, s)?),
        entry("cyclic1", build_cyclic1(n, q(82, 100), s)?),
        entry("frc", build_frc(n, s)?),
        entry("cgc", build_cgc_full(n, s)?),
    ])
}

fn criterion_10() -> Outcome {
    let (n, s) = (100, 19);
    let bundle = wrap(fixed_s_bundle(n, s))?;
    let mut notes = Vec::new();
    let mut failures = Vec::new();

    // (a) determinism
    let settings = SimSettings { persistence_block: 25, ..SimSettings::default() };
    let cfg = SimConfig { scheme: bundle[1].scheme.clone(), settings: settings.clone(), delta_override: None };
    let (t1, t2) = (wrap(run_sim(&cfg))?, wrap(run_sim(&cfg))?);
    let same_bits = t1.records.len() == t2.records.len()
        && t1.records.iter().zip(&t2.records).all(|(a, b)| {
            a.wall_clock.to_bits() == b.wall_clock.to_bits() && a.loss.to_bits() == b.loss.to_bits() && a.recovered == b.recovered
        });
    if t1 == t2 && same_bits {
        notes.push("(a) ok".to_string());
    } else {
        failures.push("(a) traces differ between identical runs".to_string());
    }

    // (b) common random numbers, (e) recovery target for non-FRC schemes
    let traces = wrap(run_comparison(&bundle, &settings, CompareMode::FixedS))?;
    if traces.iter().all(|t| t.summary.raw_draws == traces[0].summary.raw_draws) {
        notes.push(format!("(b) ok over {} draw blocks", traces[0].summary.raw_draws.len()));
    } else {
        failures.push("(b) raw delay draws differ across schemes".to_string());
    }
    let mut e_rounds = 0;
    for (t, e) in traces.iter().zip(&bundle) {
        if e.scheme.label() == Label::Frc {
            continue;
        }
        let need = e.scheme.required();
        if let Some(r) = t.records.iter().find(|r| r.recovered < need) {
            failures.push(format!("(e) {} recovered {} < {need} at iteration {}", t.name, r.recovered, r.iter));
        }
        e_rounds += t.records.len();
    }
    let small_settings = SimSettings {
        persistence_block: 1,
        dataset: DatasetSpec { points: 1260, ..DatasetSpec::default() },
        ..SimSettings::default()
    };
    for (name, scheme) in wrap(acceptance_schemes())? {
        let need = scheme.required();
        let cfg = SimConfig { scheme, settings: small_settings.clone(), delta_override: None };
        let t = wrap(run_sim(&cfg))?;
        if let Some(r) = t.records.iter().find(|r| r.recovered < need) {
            failures.push(format!("(e) {name} recovered {} < {need} at iteration {}", r.recovered, r.iter));
        }
        e_rounds += t.records.len();
    }
    notes.push(format!("(e) checked {e_rounds} rounds"));

    // (c) convex task, s = 0, step below 1/L
    let ls = DatasetSpec { task: Task::LeastSquares, ..DatasetSpec::default() };
    let data = wrap(Dataset::generate(&ls))?;
    let step = 0.5 / data.smoothness();
    let cfg = SimConfig {
        scheme: wrap(build_uncoded_forget_s(10, 0))?,
        settings: SimSettings { dataset: ls, step_size: step, iterations: 100, ..SimSettings::default() },
        delta_override: None,
    };
    let t = wrap(run_sim(&cfg))?;
    let mut prev = data.loss(&vec![0.0; data.dim]);
    let mut rises = 0;
    for r in &t.records {
        // rounding slack only
        if r.loss > prev + 1e-12 * prev.abs() {
            rises += 1;
        }
        prev = r.loss;
    }
    if rises == 0 {
        notes.push(format!("(c) ok, loss {:.4} after 100 steps", prev));
    } else {
        failures.push(format!("(c) loss rose in {rises} rounds"));
    }

    // (d) consecutive stragglers: FRC vs cyclic1 at alpha = .82
    let adv = SimSettings { pattern: StragglerPattern::Consecutive { start: 0 }, ..settings.clone() };
    let pair = vec![bundle[2].clone(), bundle[1].clone()];
    let traces = wrap(run_comparison(&pair, &adv, CompareMode::FixedS))?;
    let (frc, cyc) = (traces[0].summary.mean_recovered_fraction, traces[1].summary.mean_recovered_fraction);
    if frc < cyc {
        notes.push(format!("(d) ok, frc {frc:.3} < cyclic {cyc:.3}"));
    } else {
        failures.push(format!("(d) frc mean recovered {frc:.3} is not below cyclic1(.82) {cyc:.3}"));
    }

    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; passed: {}", failures.join("; "), notes.join("; ")))
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "load table reproduction", 1, criterion_1),
        (2, "assignment table fidelity", 1, criterion_2),
        (3, "exhaustive feasibility and decoders", 60, criterion_3),
        (4, "impossibility confirmation", 120, criterion_4),
        (5, "stopping straggler fixtures", 1, criterion_5),
        (6, "delta* sweep", 10, criterion_6),
        (7, "lower-bound consistency", 1, criterion_7),
        (8, "delay closed forms vs Monte Carlo", 60, criterion_8),
        (9, "convexity inequality", 5, criterion_9),
        (10, "simulation properties", 300, criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("over time limit; {msg}")),
            other => other,
        };
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} criterion {id:>2} {name} [{:.2}s, limit {limit}s]: {msg}", took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! `gradcode` command-line front end.
//!
//! Exit codes: 0 ok, 1 other failure, 2 infeasible (construction refused or
//! verify found a failing straggler set), 3 oracle input too large,
//! 4 configuration, parameter, parse or usage error.

mod specs;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gradcode::constructions::*;
use gradcode::delay::scheme1_vs_scheme2;
use gradcode::feasibility::{impossibility_predicates, lower_bound, naive_bound, scheme_bound_report};
use gradcode::ratio::{format_ratio, parse_ratio};
use gradcode::scheme::{render_table, RenderStyle};
use gradcode::sim::{
    run_comparison, run_sim, write_bundle, write_trace_csv, CompareMode, ComparisonEntry, SimConfig, SimSettings,
    StragglerPattern, Task,
};
use gradcode::{load_report, oracle_feasible, DelayModel, GcError, GcScheme, OracleMode};

use specs::{build_spec, parse_spec};

#[derive(Parser)]
#[command(name = "gradcode", version, about = "Gradient codes with partial recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a scheme and print its JSON.
    Construct(ConstructArgs),
    /// Print the worker × partition assignment table.
    Render(RenderArgs),
    /// Run the feasibility oracle on a scheme.
    Verify(VerifyArgs),
    /// Load lower bounds and impossibility checks.
    Bound(BoundArgs),
    /// Smallest feasible delta of the intermediate scheme for y = 1..ymax.
    SweepDelta(SweepArgs),
    /// Expected iteration delay, optionally against Monte Carlo.
    Delay(DelayArgs),
    /// Simulate one scheme; CSV trace on stdout.
    Simulate(SimulateArgs),
    /// Simulate several schemes on common delay streams; writes a bundle.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cyclic1,
    Cyclic2,
    Combinatorial,
    Balanced,
    Tdesign,
    Intermediate,
    Uncoded,
    Frc,
    Cgc,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: Option<usize>,
    /// Exact fraction, e.g. 6/7.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    s: Option<usize>,
    /// Replication / list length (combinatorial, balanced, intermediate).
    #[arg(long)]
    y: Option<usize>,
    /// Total gap (intermediate); defaults to the smallest feasible one.
    #[arg(long)]
    delta: Option<usize>,
    /// Comma-separated gaps summing to delta (intermediate).
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<usize>>,
    /// Built-in design name (tdesign).
    #[arg(long, default_value = "hadamard-3-8-4-1")]
    design: String,
    /// Design file: `t v p lambda` header, then one block per line.
    #[arg(long)]
    design_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Plain,
    Transmission,
}

#[derive(Args)]
struct RenderArgs {
    /// Scheme JSON file, `-` for stdin.
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long, value_enum, default_value = "plain")]
    style: StyleArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, env = "GRADCODE_SEED", default_value_t = 0)]
    seed: u64,
    /// Check a different target than the scheme's own.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    alpha: Option<String>,
    /// Report the bound for this scheme instead.
    #[arg(long)]
    scheme: Option<PathBuf>,
    /// Messages per worker, for the impossibility checks.
    #[arg(long)]
    m: Option<usize>,
    /// Computation load as a fraction, for the impossibility checks.
    #[arg(long)]
    l: Option<String>,
    /// Restrict the impossibility checks to cyclic assignments.
    #[arg(long)]
    cyclic: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 3)]
    ymax: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelayFamilyArg {
    Pareto,
    Sexp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingArg {
    Data,
    Server,
}

#[derive(Args)]
struct DelayArgs {
    /// Model JSON (file path or inline); flags below override it.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, value_enum)]
    family: Option<DelayFamilyArg>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long, value_enum)]
    scaling: Option<ScalingArg>,
    /// Seconds per gradient (data scaling).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    /// Gradients computed per worker.
    #[arg(long, default_value_t = 0.0)]
    points: f64,
    /// Monte Carlo trials.
    #[arg(long)]
    mc: Option<usize>,
    #[arg(long, env = "GRADCODE_SEED", default_value_t = 0)]
    seed: u64,
    /// Also compare the uncoded and y = 2 schemes at this alpha (float).
    #[arg(long)]
    compare_alpha: Option<f64>,
    /// Dataset size for --compare-alpha.
    #[arg(long)]
    d: Option<f64>,
}

#[derive(Args)]
struct SimFlags {
    /// JSON settings file (model, dataset, step_size, ...); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long, env = "GRADCODE_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    step_size: Option<f64>,
    #[arg(long)]
    persistence_block: Option<usize>,
    /// random, consecutive[:START] or custom:W1,W2,... (1-based).
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    normalize: bool,
    #[arg(long, value_enum)]
    task: Option<TaskArg>,
    /// Training points d.
    #[arg(long)]
    points: Option<usize>,
    /// Delay model JSON (file path or inline).
    #[arg(long)]
    model: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Logistic,
    LeastSquares,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scheme JSON file, or a spec like `cyclic1:.82` (needs --n, --s).
    #[arg(long)]
    scheme: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    alpha: Option<String>,
    /// Seconds per gradient for this scheme only.
    #[arg(long)]
    delta_override: Option<f64>,
    #[command(flatten)]
    sim: SimFlags,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareModeArg {
    FixedS,
    FixedAlpha,
    Free,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_enum, default_value = "fixed-s")]
    mode: CompareModeArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    /// Shared fraction for specs that leave it out.
    #[arg(long)]
    alpha: Option<String>,
    /// Comma-separated scheme specs.
    #[arg(long, value_delimiter = ',', required = true)]
    schemes: Vec<String>,
    #[command(flatten)]
    sim: SimFlags,
    #[arg(long, default_value = "bundle")]
    out_dir: PathBuf,
}

fn exit_code(e: &GcError) -> u8 {
    match e {
        GcError::Infeasible(_) => 2,
        GcError::TooLarge(_) => 3,
        GcError::Config(_)
        | GcError::Parameter(_)
        | GcError::Parse(_)
        | GcError::Design(_)
        | GcError::Structural(_)
        | GcError::Json(_)
        | GcError::InfiniteMean(_) => 4,
        _ => 1,
    }
}

fn need<T>(v: Option<T>, flag: &str, cmd: &str) -> gradcode::Result<T> {
    v.ok_or_else(|| GcError::Config(format!("{cmd} needs --{flag}")))
}

fn read_input(path: &Path) -> gradcode::Result<String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn read_scheme(path: &Path) -> gradcode::Result<GcScheme> {
    GcScheme::from_json(&read_input(path)?)
}

/// Inline JSON when it starts with `{`, otherwise a file path.
fn inline_or_file(text: &str) -> gradcode::Result<String> {
    if text.trim_start().starts_with('{') {
        Ok(text.to_string())
    } else {
        Ok(fs::read_to_string(text)?)
    }
}

fn emit(out: Option<&Path>, text: &str) -> gradcode::Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn print_json(v: &Value) -> gradcode::Result<()> {
    emit(None, &format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn construct(a: &ConstructArgs) -> gradcode::Result<GcScheme> {
    let cmd = "construct";
    if let FamilyArg::Tdesign = a.family {
        let design = match &a.design_file {
            Some(p) => TDesign::parse(&fs::read_to_string(p)?)?,
            None => TDesign::builtin(&a.design).ok_or_else(|| GcError::Config(format!("unknown design {:?}", a.design)))?,
        };
        return build_from_tdesign(&design);
    }
    let n = need(a.n, "n", cmd)?;
    let s = need(a.s, "s", cmd)?;
    let alpha = || -> gradcode::Result<_> { parse_ratio(need(a.alpha.as_deref(), "alpha", cmd)?) };
    match a.family {
        FamilyArg::Cyclic1 => build_cyclic1(n, alpha()?, s),
        FamilyArg::Cyclic2 => build_cyclic2(n, alpha()?, s),
        FamilyArg::Combinatorial => build_combinatorial(n, alpha()?, s, need(a.y, "y", cmd)?),
        FamilyArg::Balanced => build_balanced(n, alpha()?, s, need(a.y, "y", cmd)?),
        FamilyArg::Intermediate => {
            let alpha = alpha()?;
            let y = need(a.y, "y", cmd)?;
            let delta = match a.delta {
                Some(d) => d,
                None => delta_star(n, s, &alpha, y)
                    .ok_or_else(|| GcError::Infeasible(format!("no delta in [{y}, {s}] meets the intermediate condition")))?,
            };
            let ip = match &a.gammas {
                Some(g) => IntermediateParams::new(y, delta, g.clone())?,
                None => IntermediateParams::balanced(y, delta)?,
            };
            build_intermediate(n, alpha, s, &ip)
        }
        FamilyArg::Uncoded => build_uncoded_forget_s(n, s),
        FamilyArg::Frc => build_frc(n, s),
        FamilyArg::Cgc => build_cgc_full(n, s),
        FamilyArg::Tdesign => unreachable!("handled above"),
    }
}

fn verify(a: &VerifyArgs) -> gradcode::Result<u8> {
    let scheme = read_scheme(&a.scheme)?;
    let alpha = a.alpha.as_deref().map(parse_ratio).transpose()?.unwrap_or_else(|| scheme.alpha());
    let s = a.s.unwrap_or(scheme.s());
    let mode = match a.mode {
        ModeArg::Exhaustive => OracleMode::Exhaustive,
        ModeArg::Sampled => OracleMode::Sampled { samples: a.samples, seed: a.seed },
    };
    let verdict = oracle_feasible(&scheme, alpha, s, mode).map_err(|e| match e {
        GcError::TooLarge(m) => GcError::TooLarge(format!("{m} (--mode sampled --samples N)")),
        other => other,
    })?;
    print_json(&verdict.to_json())?;
    Ok(if verdict.feasible { 0 } else { 2 })
}

fn bound(a: &BoundArgs) -> gradcode::Result<()> {
    let mut out = serde_json::Map::new();
    let (n, s, alpha) = match &a.scheme {
        Some(p) => {
            let scheme = read_scheme(p)?;
            out.insert("scheme".into(), serde_json::to_value(scheme_bound_report(&scheme))?);
            (scheme.n(), scheme.s(), scheme.alpha())
        }
        None => (need(a.n, "n", "bound")?, need(a.s, "s", "bound")?, parse_ratio(&need(a.alpha.clone(), "alpha", "bound")?)?),
    };
    out.insert("lower_bound".into(), serde_json::to_value(lower_bound(n, s, alpha))?);
    out.insert("naive_bound".into(), json!(format_ratio(&naive_bound(n, s, alpha))));
    if let (Some(m), Some(l)) = (a.m, &a.l) {
        let verdict = impossibility_predicates(n, alpha, s, m, parse_ratio(l)?, a.cyclic);
        let reasons: Vec<String> = verdict.reasons.iter().map(|r| r.to_string()).collect();
        out.insert("impossibility".into(), json!({ "ruled_out": verdict.ruled_out, "reasons": reasons }));
    }
    print_json(&Value::Object(out))
}

fn sweep_delta(a: &SweepArgs) -> gradcode::Result<()> {
    let alpha = parse_ratio(&a.alpha)?;
    let mut text = String::from("y,delta_star,k,m,l\n");
    for y in 1..=a.ymax {
        let Some(delta) = delta_star(a.n, a.s, &alpha, y) else {
            text.push_str(&format!("{y},,,,\n"));
            continue;
        };
        let built = IntermediateParams::balanced(y, delta).and_then(|ip| build_intermediate(a.n, alpha, a.s, &ip));
        match built.and_then(|sch| load_report(&sch).map(|r| (sch.k(), r))) {
            Ok((k, r)) => text.push_str(&format!("{y},{delta},{k},{},{}\n", r.m, format_ratio(&r.l))),
            Err(e) => {
                eprintln!("y={y}: {e}");
                text.push_str(&format!("{y},{delta},,,\n"));
            }
        }
    }
    emit(None, &text)
}

fn delay_model(a: &DelayArgs) -> gradcode::Result<DelayModel> {
    let mut v: Value = match &a.model {
        Some(m) => serde_json::from_str(&inline_or_file(m)?)?,
        None => json!({ "scaling": { "type": "data", "delta": 0.0 } }),
    };
    let obj = v.as_object_mut().ok_or_else(|| GcError::Config("model must be a JSON object".into()))?;
    if let Some(f) = a.family {
        obj.insert("family".into(), json!(match f { DelayFamilyArg::Pareto => "pareto", DelayFamilyArg::Sexp => "sexp" }));
    }
    for (key, val) in [("lambda", a.lambda), ("rho", a.rho), ("gamma", a.gamma), ("w", a.w)] {
        if let Some(x) = val {
            obj.insert(key.into(), json!(x));
        }
    }
    match (a.scaling, a.delta) {
        (Some(ScalingArg::Server), _) => {
            obj.insert("scaling".into(), json!({ "type": "server" }));
        }
        (Some(ScalingArg::Data), d) | (None, d @ Some(_)) => {
            obj.insert("scaling".into(), json!({ "type": "data", "delta": d.unwrap_or(0.0) }));
        }
        (None, None) => {}
    }
    DelayModel::from_json(&v.to_string())
}

fn delay(a: &DelayArgs) -> gradcode::Result<()> {
    let model = delay_model(a)?;
    let exact = model.expected_iteration_delay(a.n, a.s, a.points)?;
    let mut out = json!({ "model": model, "n": a.n, "s": a.s, "points": a.points, "closed_form": exact });
    if let Some(trials) = a.mc {
        let mc = model.monte_carlo(a.n, a.s, a.points, trials, a.seed)?;
        out["monte_carlo"] = json!(mc);
        out["trials"] = json!(trials);
        out["rel_error"] = json!((mc - exact).abs() / exact);
    }
    if let Some(alpha) = a.compare_alpha {
        let d = need(a.d, "d", "delay --compare-alpha")?;
        out["comparison"] = serde_json::to_value(scheme1_vs_scheme2(&model, a.n, alpha, d)?)?;
    }
    print_json(&out)
}

fn parse_pattern(text: &str) -> gradcode::Result<StragglerPattern> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let one_based = |t: &str| -> gradcode::Result<usize> {
        t.trim()
            .parse::<usize>()
            .ok()
            .and_then(|w| w.checked_sub(1))
            .ok_or_else(|| GcError::Config(format!("bad worker label {t:?} in pattern (1-based)")))
    };
    match kind {
        "random" => Ok(StragglerPattern::Random),
        "consecutive" => Ok(StragglerPattern::Consecutive { start: if rest.is_empty() { 0 } else { one_based(rest)? } }),
        "custom" => Ok(StragglerPattern::Custom {
            workers: rest.split(',').filter(|t| !t.trim().is_empty()).map(one_based).collect::<gradcode::Result<_>>()?,
        }),
        other => Err(GcError::Config(format!("unknown straggler pattern {other:?}"))),
    }
}

fn sim_settings(f: &SimFlags) -> gradcode::Result<SimSettings> {
    let mut st: SimSettings = match &f.config {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => SimSettings::default(),
    };
    if let Some(m) = &f.model {
        st.model = DelayModel::from_json(&inline_or_file(m)?)?;
    }
    if let Some(v) = f.iterations {
        st.iterations = v;
    }
    if let Some(v) = f.seed {
        st.seed = v;
    }
    if let Some(v) = f.step_size {
        st.step_size = v;
    }
    if let Some(v) = f.persistence_block {
        st.persistence_block = v;
    }
    if let Some(p) = &f.pattern {
        st.pattern = parse_pattern(p)?;
    }
    if f.normalize {
        st.normalize = true;
    }
    if let Some(t) = f.task {
        st.dataset.task = match t {
            TaskArg::Logistic => Task::Logistic,
            TaskArg::LeastSquares => Task::LeastSquares,
        };
    }
    if let Some(p) = f.points {
        st.dataset.points = p;
    }
    Ok(st)
}

fn simulate(a: &SimulateArgs) -> gradcode::Result<()> {
    let scheme = if Path::new(&a.scheme).exists() || a.scheme == "-" {
        read_scheme(Path::new(&a.scheme))?
    } else {
        let spec = parse_spec(&a.scheme)?;
        build_spec(&spec, need(a.n, "n", "simulate")?, need(a.s.or(spec.s), "s", "simulate")?, a.alpha.as_deref())?
    };
    let settings = sim_settings(&a.sim)?;
    let trace = run_sim(&SimConfig { scheme, settings, delta_override: a.delta_override })?;
    let mut buf = Vec::new();
    write_trace_csv(&trace, &mut buf)?;
    emit(a.out.as_deref(), &String::from_utf8_lossy(&buf))?;
    eprintln!("summary: {}", serde_json::to_string(&trace.summary)?);
    Ok(())
}

fn compare(a: &CompareArgs) -> gradcode::Result<()> {
    let settings = sim_settings(&a.sim)?;
    let entries = a
        .schemes
        .iter()
        .map(|text| {
            let spec = parse_spec(text)?;
            let scheme = build_spec(&spec, a.n, a.s, a.alpha.as_deref())?;
            Ok(ComparisonEntry { name: spec.text.clone(), scheme, delta_override: None })
        })
        .collect::<gradcode::Result<Vec<_>>>()?;
    let mode = match a.mode {
        CompareModeArg::FixedS => CompareMode::FixedS,
        CompareModeArg::FixedAlpha => CompareMode::FixedAlpha,
        CompareModeArg::Free => CompareMode::Free,
    };
    let traces = run_comparison(&entries, &settings, mode)?;
    let written = write_bundle(&traces, &settings, &a.out_dir)?;
    for p in &written {
        eprintln!("wrote {}", p.display());
    }
    let manifest = written.last().expect("bundle writes a manifest");
    emit(None, &format!("{}\n", fs::read_to_string(manifest)?))
}

fn run(cli: Cli) -> gradcode::Result<u8> {
    match cli.command {
        Command::Construct(a) => {
            let scheme = construct(&a)?;
            emit(a.out.as_deref(), &format!("{}\n", scheme.to_json()))?;
        }
        Command::Render(a) => {
            let scheme = read_scheme(&a.scheme)?;
            let style = match a.style {
                StyleArg::Plain => RenderStyle::Plain,
                StyleArg::Transmission => RenderStyle::Transmission,
            };
            emit(None, &render_table(&scheme, style))?;
        }
        Command::Verify(a) => return verify(&a),
        Command::Bound(a) => bound(&a)?,
        Command::SweepDelta(a) => sweep_delta(&a)?,
        Command::Delay(a) => delay(&a)?,
        Command::Simulate(a) => simulate(&a)?,
        Command::Compare(a) => compare(&a)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

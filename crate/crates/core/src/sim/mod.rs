//! Synchronous master-worker gradient descent driven by the delay models.
//!
//! Each round: every worker's completion time comes from its current raw
//! delay draw (redrawn once per persistence block), the s slowest straggle,
//! the round lasts until the slowest non-straggler finishes, and the update
//! is the sum of the partial gradients the decoder's certificate recovers.
//!
//! The certificate is checked in exact arithmetic, so the update is formed
//! as Σ_{j∈I} g_j in ascending j rather than by replaying the certificate on
//! floating-point messages. Replaying is exact in theory but the
//! full-recovery code's integer coefficients grow past 2^60 at n = 100,
//! which leaves nothing of an f64 sum. [`MessageTable`] does the replay for
//! schemes where that is well conditioned.

mod dataset;
mod output;

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use dataset::{Dataset, DatasetSpec, Task};
pub use output::{read_trace_csv, write_bundle, write_trace_csv, BundleManifest, ManifestEntry};

use crate::decoding::{decode, RecoveryCertificate, StragglerSet};
use crate::delay::{DelayModel, Scaling};
use crate::error::{GcError, Result};
use crate::ratio::format_ratio;
use crate::scheme::{GcScheme, Label};

/// Which workers fail in a round, before the delays fill the remaining slots.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StragglerPattern {
    /// The s slowest workers.
    #[default]
    Random,
    /// Workers start, start+1, ..., start+s−1 (mod n), 0-based.
    Consecutive { start: usize },
    /// A fixed 0-based list of at most s workers.
    Custom { workers: Vec<usize> },
}

/// Straggler selection for one scheme: the forced workers, topped up with the
/// slowest remaining ones. Ties in completion time go to the higher index,
/// i.e. workers are ranked by (time, index) and the last s straggle.
#[derive(Clone, Debug)]
pub struct StragglerSelector {
    forced: Vec<usize>,
    n: usize,
    s: usize,
}

pub fn adversarial_straggler_hook(pattern: &StragglerPattern, n: usize, s: usize) -> Result<StragglerSelector> {
    let mut forced: Vec<usize> = match pattern {
        StragglerPattern::Random => Vec::new(),
        StragglerPattern::Consecutive { start } => (0..s).map(|o| (start + o) % n).collect(),
        StragglerPattern::Custom { workers } => workers.clone(),
    };
    forced.sort_unstable();
    forced.dedup();
    if forced.len() > s {
        return Err(GcError::Config(format!("straggler pattern has {} workers but s = {s}", forced.len())));
    }
    if let Some(&w) = forced.iter().find(|&&w| w >= n) {
        return Err(GcError::Config(format!("straggler pattern names worker {} but n = {n}", w + 1)));
    }
    Ok(StragglerSelector { forced, n, s })
}

impl StragglerSelector {
    pub fn select(&self, times: &[f64]) -> Vec<usize> {
        assert_eq!(times.len(), self.n);
        let mut order: Vec<usize> = (0..self.n).filter(|w| self.forced.binary_search(w).is_err()).collect();
        order.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
        let extra = self.s - self.forced.len();
        let mut out = self.forced.clone();
        out.extend_from_slice(&order[order.len() - extra..]);
        out.sort_unstable();
        out
    }
}

/// Everything a run needs apart from the scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimSettings {
    pub model: DelayModel,
    pub dataset: DatasetSpec,
    pub step_size: f64,
    pub iterations: usize,
    /// Rounds between delay redraws.
    pub persistence_block: usize,
    pub seed: u64,
    pub pattern: StragglerPattern,
    /// Rescale each update by k/|I|. Off by default.
    pub normalize: bool,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            model: DelayModel::pareto(0.001, 1.1, Scaling::Data { delta: 5e-7 }).expect("valid default model"),
            dataset: DatasetSpec::default(),
            step_size: 0.5,
            iterations: 300,
            persistence_block: 300,
            seed: 0,
            pattern: StragglerPattern::Random,
            normalize: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub scheme: GcScheme,
    pub settings: SimSettings,
    /// Per-scheme seconds per gradient, replacing the model's delta.
    pub delta_override: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterRecord {
    pub iter: usize,
    /// Cumulative seconds at the end of this round.
    pub wall_clock: f64,
    pub iter_time: f64,
    pub recovered: usize,
    /// Training objective after the update.
    pub loss: f64,
    /// Held-out accuracy after the update (logistic task only).
    pub accuracy: Option<f64>,
    /// The decoder fell short of ⌈αk⌉ this round.
    pub shortfall: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimSummary {
    pub iterations: usize,
    pub total_wall_clock: f64,
    pub mean_recovered_fraction: f64,
    pub min_recovered: usize,
    pub shortfall_rounds: usize,
    /// |I| → number of rounds.
    pub recovered_histogram: BTreeMap<usize, usize>,
    /// How many rounds each partition was in I.
    pub partition_counts: Vec<usize>,
    pub distinct_straggler_sets: usize,
    pub final_loss: f64,
    pub final_accuracy: Option<f64>,
    /// Raw delay draw per worker, one row per persistence block.
    #[serde(skip)]
    pub raw_draws: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimTrace {
    pub name: String,
    pub label: Label,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub alpha: String,
    pub records: Vec<IterRecord>,
    pub summary: SimSummary,
}

pub fn run_sim(config: &SimConfig) -> Result<SimTrace> {
    let data = Dataset::generate(&config.settings.dataset)?;
    let name = config.scheme.label().to_string();
    simulate(&name, &config.scheme, config.delta_override, &config.settings, &data)
}

#[derive(Clone, Debug)]
pub struct ComparisonEntry {
    pub name: String,
    pub scheme: GcScheme,
    pub delta_override: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    FixedS,
    FixedAlpha,
    /// Only n must agree.
    Free,
}

/// Runs every scheme on the same dataset and the same per-worker delay
/// streams, so differences come from the schemes alone.
pub fn run_comparison(entries: &[ComparisonEntry], settings: &SimSettings, mode: CompareMode) -> Result<Vec<SimTrace>> {
    let first = entries.first().ok_or_else(|| GcError::Config("no schemes to compare".into()))?;
    for e in entries {
        if e.scheme.n() != first.scheme.n() {
            return Err(GcError::Config(format!("{} has n = {}, {} has n = {}", e.name, e.scheme.n(), first.name, first.scheme.n())));
        }
        if mode == CompareMode::FixedS && e.scheme.s() != first.scheme.s() {
            return Err(GcError::Config(format!("fixed-s comparison: {} has s = {}, {} has s = {}", e.name, e.scheme.s(), first.name, first.scheme.s())));
        }
        if mode == CompareMode::FixedAlpha && e.scheme.alpha() != first.scheme.alpha() {
            return Err(GcError::Config(format!(
                "fixed-alpha comparison: {} has alpha = {}, {} has alpha = {}",
                e.name,
                format_ratio(&e.scheme.alpha()),
                first.name,
                format_ratio(&first.scheme.alpha())
            )));
        }
    }
    let data = Dataset::generate(&settings.dataset)?;
    entries.par_iter().map(|e| simulate(&e.name, &e.scheme, e.delta_override, settings, &data)).collect()
}

fn check_settings(scheme: &GcScheme, settings: &SimSettings, data: &Dataset) -> Result<()> {
    if settings.persistence_block == 0 {
        return Err(GcError::Config("persistence_block must be at least 1".into()));
    }
    if data.len() % scheme.k() != 0 {
        return Err(GcError::Config(format!("{} training points do not split into k = {} equal partitions", data.len(), scheme.k())));
    }
    if !(settings.step_size > 0.0) {
        return Err(GcError::Config(format!("step size must be positive, got {}", settings.step_size)));
    }
    Ok(())
}

/// Per-worker delay streams: worker w always reads stream w of the seed.
pub fn worker_streams(seed: u64, n: usize) -> Vec<ChaCha8Rng> {
    (0..n)
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            rng
        })
        .collect()
}

fn simulate(name: &str, scheme: &GcScheme, delta: Option<f64>, settings: &SimSettings, data: &Dataset) -> Result<SimTrace> {
    check_settings(scheme, settings, data)?;
    let (n, k, s) = (scheme.n(), scheme.k(), scheme.s());
    let model = settings.model.with_delta(delta);
    let selector = adversarial_straggler_hook(&settings.pattern, n, s)?;
    let per_partition = (data.len() / k) as f64;
    let points: Vec<f64> = scheme.assignment().iter().map(|a| a.len() as f64 * per_partition).collect();

    let mut streams = worker_streams(settings.seed, n);
    let mut raw = vec![0.0; n];
    let mut raw_draws = Vec::new();
    let mut certs: HashMap<Vec<usize>, RecoveryCertificate> = HashMap::new();
    let mut beta = vec![0.0; data.dim];
    let mut clock = 0.0;
    let mut records = Vec::with_capacity(settings.iterations);
    let mut histogram = BTreeMap::new();
    let mut partition_counts = vec![0usize; k];
    let required = scheme.required();

    for iter in 0..settings.iterations {
        if iter % settings.persistence_block == 0 {
            for (x, rng) in raw.iter_mut().zip(streams.iter_mut()) {
                *x = model.raw_draw(rng);
            }
            raw_draws.push(raw.clone());
        }
        let times: Vec<f64> = (0..n).map(|w| model.completion(points[w], raw[w])).collect();
        let stragglers = selector.select(&times);
        let iter_time = (0..n).filter(|w| stragglers.binary_search(w).is_err()).map(|w| times[w]).fold(0.0, f64::max);
        clock += iter_time;

        if !certs.contains_key(&stragglers) {
            let set = StragglerSet::for_scheme(stragglers.clone(), scheme)?;
            let mut cert = decode(scheme, &set)?;
            cert.recovered.sort_unstable();
            certs.insert(stragglers.clone(), cert);
        }
        let cert = &certs[&stragglers];
        let mut update = vec![0.0; data.dim];
        for &j in &cert.recovered {
            for (u, g) in update.iter_mut().zip(&data.partial_gradient(j, k, &beta)) {
                *u += g;
            }
        }
        let got = cert.recovered.len();
        if settings.normalize && got > 0 {
            let scale = k as f64 / got as f64;
            update.iter_mut().for_each(|u| *u *= scale);
        }
        for (b, u) in beta.iter_mut().zip(&update) {
            *b -= settings.step_size * u;
        }
        *histogram.entry(got).or_insert(0) += 1;
        for &j in &cert.recovered {
            partition_counts[j] += 1;
        }
        records.push(IterRecord {
            iter,
            wall_clock: clock,
            iter_time,
            recovered: got,
            loss: data.loss(&beta),
            accuracy: data.accuracy(&beta),
            shortfall: got < required,
        });
    }

    let rounds = records.len().max(1) as f64;
    let summary = SimSummary {
        iterations: records.len(),
        total_wall_clock: clock,
        mean_recovered_fraction: records.iter().map(|r| r.recovered as f64 / k as f64).sum::<f64>() / rounds,
        min_recovered: records.iter().map(|r| r.recovered).min().unwrap_or(0),
        shortfall_rounds: records.iter().filter(|r| r.shortfall).count(),
        recovered_histogram: histogram,
        partition_counts,
        distinct_straggler_sets: certs.len(),
        final_loss: records.last().map_or(data.loss(&beta), |r| r.loss),
        final_accuracy: data.accuracy(&beta),
        raw_draws,
    };
    Ok(SimTrace {
        name: name.to_string(),
        label: scheme.label(),
        n,
        k,
        s,
        alpha: format_ratio(&scheme.alpha()),
        records,
        summary,
    })
}

/// Floating-point copies of every worker's message coefficients.
#[derive(Clone, Debug)]
pub struct MessageTable {
    rows: Vec<Vec<Vec<(usize, f64)>>>,
}

impl MessageTable {
    pub fn new(scheme: &GcScheme) -> Self {
        let rows = scheme
            .rows()
            .iter()
            .map(|rs| {
                rs.iter()
                    .map(|r| r.entries().iter().map(|(j, c)| (*j, c.to_f64().unwrap_or(f64::NAN))).collect())
                    .collect()
            })
            .collect();
        MessageTable { rows }
    }

    /// The message worker `w` sends as row `r`, given the partial gradients.
    pub fn message(&self, w: usize, r: usize, grads: &[Vec<f64>]) -> Vec<f64> {
        let dim = grads.first().map_or(0, Vec::len);
        let mut out = vec![0.0; dim];
        for &(j, c) in &self.rows[w][r] {
            for (o, g) in out.iter_mut().zip(&grads[j]) {
                *o += c * g;
            }
        }
        out
    }

    /// What the master computes from the received messages. Terms are
    /// accumulated in certificate order (sorted by worker, then row).
    pub fn apply(&self, cert: &RecoveryCertificate, grads: &[Vec<f64>]) -> Vec<f64> {
        let dim = grads.first().map_or(0, Vec::len);
        let mut out = vec![0.0; dim];
        for t in &cert.combo {
            let coef = t.coef.to_f64().unwrap_or(f64::NAN);
            for (o, m) in out.iter_mut().zip(self.message(t.worker, t.row, grads)) {
                *o += coef * m;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;
    use num_rational::Rational64;

    fn settings(iterations: usize) -> SimSettings {
        SimSettings {
            dataset: DatasetSpec { points: 420, dim: 5, test_points: 200, ..Default::default() },
            iterations,
            persistence_block: 7,
            seed: 3,
            ..Default::default()
        }
    }

    #[test]
    fn selector_ties_and_forcing() {
        let sel = adversarial_straggler_hook(&StragglerPattern::Random, 5, 2).unwrap();
        assert_eq!(sel.select(&[1.0, 3.0, 3.0, 0.5, 2.0]), vec![1, 2]);
        assert_eq!(sel.select(&[1.0; 5]), vec![3, 4]);
        let sel = adversarial_straggler_hook(&StragglerPattern::Custom { workers: vec![0] }, 5, 2).unwrap();
        assert_eq!(sel.select(&[1.0, 3.0, 2.0, 0.5, 2.5]), vec![0, 1]);
        let sel = adversarial_straggler_hook(&StragglerPattern::Consecutive { start: 4 }, 5, 2).unwrap();
        assert_eq!(sel.select(&[9.0; 5]), vec![0, 4]);
        assert!(adversarial_straggler_hook(&StragglerPattern::Custom { workers: vec![0, 1, 2] }, 5, 2).is_err());
        let empty = adversarial_straggler_hook(&StragglerPattern::Custom { workers: vec![] }, 5, 2).unwrap();
        assert_eq!(empty.select(&[1.0, 3.0, 3.0, 0.5, 2.0]), vec![1, 2]);
    }

    #[test]
    fn uncoded_and_cgc_recovery_counts() {
        let uncoded = build_uncoded_forget_s(7, 3).unwrap();
        let cfg = SimConfig { scheme: uncoded, settings: settings(30), delta_override: None };
        let t = run_sim(&cfg).unwrap();
        assert!(t.records.iter().all(|r| r.recovered == 4));
        let cgc = build_cgc_full(7, 3).unwrap();
        let t = run_sim(&SimConfig { scheme: cgc, settings: settings(30), delta_override: None }).unwrap();
        assert!(t.records.iter().all(|r| r.recovered == 7 && !r.shortfall));
        assert!(t.records.windows(2).all(|w| w[1].wall_clock >= w[0].wall_clock));
    }

    #[test]
    fn iteration_time_is_order_statistic() {
        let scheme = build_cyclic1(7, Rational64::new(6, 7), 3).unwrap();
        let st = settings(14);
        let t = run_sim(&SimConfig { scheme: scheme.clone(), settings: st.clone(), delta_override: None }).unwrap();
        let points = 3.0 * 60.0;
        for (b, draws) in t.summary.raw_draws.iter().enumerate() {
            let mut times: Vec<f64> = draws.iter().map(|&x| st.model.completion(points, x)).collect();
            times.sort_by(f64::total_cmp);
            assert_eq!(t.records[b * 7].iter_time, times[7 - 3 - 1]);
        }
        let sum: f64 = t.records.iter().map(|r| r.iter_time).sum();
        assert!((sum - t.summary.total_wall_clock).abs() <= 1e-12 * sum);
    }

    #[test]
    fn certificates_match_direct_sums() {
        let data = Dataset::generate(&DatasetSpec { points: 420, dim: 3, ..Default::default() }).unwrap();
        let beta = vec![0.2, -0.4, 0.7];
        let schemes = vec![
            build_balanced(5, Rational64::new(7, 10), 3, 2).unwrap(),
            build_cgc_full(7, 3).unwrap(),
            build_cyclic2(9, Rational64::new(7, 9), 4).unwrap(),
        ];
        for scheme in schemes {
            let k = scheme.k();
            let grads: Vec<Vec<f64>> = (0..k).map(|j| data.partial_gradient(j, k, &beta)).collect();
            let table = MessageTable::new(&scheme);
            for st in crate::combinatorics::subsets(scheme.n(), scheme.s()) {
                let cert = decode(&scheme, &StragglerSet::for_scheme(st, &scheme).unwrap()).unwrap();
                let got = table.apply(&cert, &grads);
                let mut want = vec![0.0; 3];
                for &j in &cert.recovered {
                    for (w, g) in want.iter_mut().zip(&grads[j]) {
                        *w += g;
                    }
                }
                let scale = want.iter().map(|v| v.abs()).fold(0.0, f64::max);
                for (a, b) in got.iter().zip(&want) {
                    assert!((a - b).abs() <= 1e-10 * scale, "{}: {a} vs {b}", scheme.label());
                }
            }
        }
    }

    #[test]
    fn bad_configs() {
        let scheme = build_uncoded_forget_s(7, 3).unwrap();
        let mut st = settings(5);
        st.dataset.points = 100;
        assert!(matches!(run_sim(&SimConfig { scheme: scheme.clone(), settings: st, delta_override: None }), Err(GcError::Config(_))));
        let mut st = settings(5);
        st.persistence_block = 0;
        assert!(matches!(run_sim(&SimConfig { scheme: scheme.clone(), settings: st, delta_override: None }), Err(GcError::Config(_))));
        let other = build_uncoded_forget_s(6, 3).unwrap();
        let entries = vec![
            ComparisonEntry { name: "a".into(), scheme, delta_override: None },
            ComparisonEntry { name: "b".into(), scheme: other, delta_override: None },
        ];
        assert!(matches!(run_comparison(&entries, &settings(5), CompareMode::Free), Err(GcError::Config(_))));
    }
}

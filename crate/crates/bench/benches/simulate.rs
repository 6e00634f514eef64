use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gradcode::sim::{run_sim, SimConfig};
use gradcode::{DelayModel, Scaling};
use gradcode_bench::{fixed_s_schemes, sim_settings};

fn simulate(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    for (name, scheme) in fixed_s_schemes().into_iter().filter(|(n, _)| *n != "cgc") {
        let cfg = SimConfig { scheme, settings: sim_settings(50), delta_override: None };
        g.bench_function(format!("{name} n=100 50 iters"), |b| b.iter(|| run_sim(black_box(&cfg)).unwrap()));
    }
    g.finish();
}

fn delay(c: &mut Criterion) {
    let model = DelayModel::shifted_exp(1.0, 2.0, Scaling::Data { delta: 1e-3 }).unwrap();
    let mut g = c.benchmark_group("delay");
    g.bench_function("closed form n=100", |b| b.iter(|| model.expected_iteration_delay(black_box(100), 19, 100.0).unwrap()));
    g.sample_size(10);
    g.bench_function("monte carlo n=100 1e4", |b| b.iter(|| model.monte_carlo(black_box(100), 19, 100.0, 10_000, 3).unwrap()));
    g.finish();
}

criterion_group!(benches, simulate, delay);
criterion_main!(benches);

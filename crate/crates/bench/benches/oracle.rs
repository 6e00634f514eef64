use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gradcode::constructions::build_cyclic1;
use gradcode::ratio::parse_ratio;
use gradcode::{oracle_feasible, OracleMode};
use gradcode_bench::small_schemes;

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (name, scheme) in small_schemes() {
        g.bench_function(format!("exhaustive {name}"), |b| {
            b.iter(|| oracle_feasible(black_box(&scheme), scheme.alpha(), scheme.s(), OracleMode::Exhaustive).unwrap())
        });
    }
    let big = build_cyclic1(18, parse_ratio("15/18").unwrap(), 7).unwrap();
    g.bench_function("exhaustive cyclic1(18)", |b| {
        b.iter(|| oracle_feasible(black_box(&big), big.alpha(), 7, OracleMode::Exhaustive).unwrap())
    });
    g.bench_function("sampled cyclic1(18) 1000", |b| {
        b.iter(|| oracle_feasible(black_box(&big), big.alpha(), 7, OracleMode::Sampled { samples: 1000, seed: 1 }).unwrap())
    });
    g.finish();
}

criterion_group!(benches, oracle);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ris_secrecy::{estimate, Executor, PreparedScenario, ScenarioConfig, Scheme};

fn bench_estimate(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate");
    group.sample_size(10);
    for k_elems in [16usize, 144] {
        let cfg = ScenarioConfig { k_elems, ..ScenarioConfig::default() };
        let sc = PreparedScenario::from_config(&cfg).unwrap();
        for scheme in [Scheme::Opt, Scheme::Ran] {
            let id = format!("{scheme}/K={k_elems}");
            group.bench_with_input(BenchmarkId::new("sequential", &id), &sc, |b, sc| {
                b.iter(|| estimate(sc, scheme, 2_000, 1, Executor::Sequential).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("parallel", &id), &sc, |b, sc| {
                b.iter(|| estimate(sc, scheme, 2_000, 1, Executor::Parallel { workers: 0 }).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_designs(c: &mut Criterion) {
    use ris_secrecy::experiments::validate::realization;
    use ris_secrecy::phase_design::{grid_oracle_min, heuristic_min_eve};

    let (g_sr, _, g_re) = realization(144, 1, 0);
    c.bench_function("heuristic_min_eve/K=144", |b| b.iter(|| heuristic_min_eve(&g_sr, &g_re).unwrap()));
    let (g_sr, _, g_re) = realization(4, 1, 0);
    c.bench_function("grid_oracle_min/K=4/32", |b| b.iter(|| grid_oracle_min(&g_sr, &g_re, 32).unwrap()));
}

criterion_group!(benches, bench_estimate, bench_designs);
criterion_main!(benches);

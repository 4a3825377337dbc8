use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gkzfrac::cohomology::CohomologyRing;
use gkzfrac::corpus;
use gkzfrac::gkz::build_system;
use gkzfrac::par::Execution;
use gkzfrac::series::{self, bseries, SeriesConfig};
use gkzfrac::toric;

fn bench_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    group.sample_size(10);
    for (f, order) in [
        (corpus::p2(), 12),
        (corpus::f1(), 8),
        (corpus::p1xp1_r2(), 8),
    ] {
        let sys = build_system(&f).unwrap();
        let ring = CohomologyRing::new(&f).unwrap();
        let w = toric::default_weight(&f, &sys.lattice).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let cfg = SeriesConfig::new(w.clone(), order).with_exec(exec);
            let id = format!("{}/{exec:?}", f.name);
            group.bench_with_input(BenchmarkId::new("period", &id), &cfg, |b, cfg| {
                b.iter(|| series::normalized_period_series(&sys, cfg).unwrap())
            });
            group.bench_with_input(
                BenchmarkId::new("b_series_pairings", &id),
                &cfg,
                |b, cfg| {
                    b.iter(|| {
                        let s = series::b_series(&sys, &ring, cfg).unwrap();
                        bseries::pairings(&s, &ring, cfg.exec)
                    })
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_series);
criterion_main!(benches);

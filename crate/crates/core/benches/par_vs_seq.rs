use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diffcheb::diffvar::{count_sequence, Base, CountOptions, DiffSystem};
use diffcheb::ideals::{run_corpus, IdealBounds, PointCheckOptions};
use diffcheb::par::Exec;

const MODES: [(&str, Exec); 2] = [("seq", Exec::Sequential), ("par", Exec::Parallel)];

fn counting(c: &mut Criterion) {
    let base = Base::new(2, 2, 1).unwrap();
    let sys = DiffSystem::parse(base, &["x".to_string()], &["x@1 - x^2 - 1".to_string()], &[], None).unwrap();
    let ns: Vec<u64> = (1..=14).collect();
    let mut group = c.benchmark_group("count_sequence");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = CountOptions { exec, ..CountOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| count_sequence(&sys, &ns, opts).unwrap())
        });
    }
    group.finish();
}

fn ideal_corpus(c: &mut Criterion) {
    let bounds = IdealBounds::new(2, 2, 2);
    let points = PointCheckOptions::default();
    let mut group = c.benchmark_group("ideal_corpus");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| run_corpus(7, 24, &bounds, &points, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, counting, ideal_corpus);
criterion_main!(benches);

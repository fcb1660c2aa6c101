use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weakverify::hypotheses::three_cell_partition;
use weakverify::rational::ratio;
use weakverify::{
    empirical_count, hoeffding_threshold, run_trials, sample, solver, subbasic_verifier, CantorPairing, Event,
    Hypothesis, Level, SampleSpace, TrialPlan, World,
};

fn thresholds(c: &mut Criterion) {
    let b = ratio(1, 2);
    let alpha = ratio(1, 20);
    let mut group = c.benchmark_group("hoeffding_threshold");
    for n in [10u64, 1000, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, &n| {
            bench.iter(|| hoeffding_threshold(black_box(n), &b, &alpha).unwrap())
        });
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let heads = Event::parse(&SampleSpace::coin(), "{H}").unwrap();
    let world = World::bernoulli(ratio(3, 5)).unwrap();
    let s = sample(&world, 10_000, 1).unwrap();
    c.bench_function("sample 10k coin flips", |bench| bench.iter(|| sample(&world, black_box(10_000), 1).unwrap()));
    c.bench_function("empirical_count 10k", |bench| bench.iter(|| empirical_count(black_box(&s), &heads).unwrap()));
}

fn trials(c: &mut Criterion) {
    let heads = Event::parse(&SampleSpace::coin(), "{H}").unwrap();
    let level = Level::new(ratio(1, 20)).unwrap();
    let h = Hypothesis::sub_basic(heads.clone(), ratio(1, 2)).unwrap();
    let v = Arc::new(subbasic_verifier(&h, &level).unwrap());
    let world = World::bernoulli(ratio(3, 5)).unwrap();
    let plan = TrialPlan::new(v, world.clone(), 500, 100, 7);
    c.bench_function("run_trials subbasic 100x500", |bench| bench.iter(|| run_trials(&plan).unwrap()));

    let q = three_cell_partition(&heads).unwrap();
    let s = Arc::new(solver(&q, &level, Arc::new(CantorPairing)).unwrap());
    let plan = TrialPlan::new(s, world, 500, 20, 7);
    c.bench_function("run_trials solver 20x500", |bench| bench.iter(|| run_trials(&plan).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = thresholds, counting, trials
}
criterion_main!(benches);

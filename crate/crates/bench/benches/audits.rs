use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use propclust::audit::{pf_min_alpha, q_core_min_alpha, rank_pjr_check, tc_min_alpha, uprf_check, RankCaps};
use propclust::{expanding_approvals, greedy_capture, Rational};
use propclust_bench::euclidean;

fn rules(c: &mut Criterion) {
    let mut g = c.benchmark_group("rules");
    for n in [50, 200] {
        let inst = euclidean(n, 5, 1);
        g.bench_with_input(BenchmarkId::new("greedy_capture", n), &inst, |b, i| b.iter(|| greedy_capture(black_box(i))));
        g.bench_with_input(BenchmarkId::new("expanding_approvals", n), &inst, |b, i| {
            b.iter(|| expanding_approvals(black_box(i)))
        });
    }
    g.finish();
}

fn single(c: &mut Criterion) {
    let mut g = c.benchmark_group("single");
    for n in [50, 200] {
        let inst = euclidean(n, 5, 2);
        let w = greedy_capture(&inst).unwrap().0;
        g.bench_with_input(BenchmarkId::new("pf", n), &n, |b, _| b.iter(|| pf_min_alpha(&inst, black_box(&w))));
        g.bench_with_input(BenchmarkId::new("tc", n), &n, |b, _| {
            b.iter(|| tc_min_alpha(&inst, black_box(&w), Rational::new(2, 1)))
        });
    }
    g.finish();
}

fn multi_and_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("multi");
    g.sample_size(10);
    let inst = euclidean(14, 4, 3);
    let w = greedy_capture(&inst).unwrap().0;
    g.bench_function("q_core q=2 n=14", |b| b.iter(|| q_core_min_alpha(&inst, black_box(&w), 2, None)));
    let caps = RankCaps::default();
    g.bench_function("rank_pjr n=14", |b| b.iter(|| rank_pjr_check(&inst, black_box(&w), &caps)));
    g.bench_function("uprf n=14", |b| b.iter(|| uprf_check(&inst, black_box(&w), &caps)));
    g.finish();
}

criterion_group!(benches, rules, single, multi_and_rank);
criterion_main!(benches);

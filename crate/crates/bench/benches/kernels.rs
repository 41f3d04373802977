use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qig_bench::{fixture, DIMS};
use qig_core::divergences::geometric_mean;
use qig_core::geodesics::{bures_distance_cone, curve_length, rld_upper_bound_cone, CurveKind, CurveSpec};
use qig_core::matkern::{eig_hermitian, frechet_derivative};
use qig_core::metrics::metric_eval;
use qig_core::verify::{run_suite, Suite};
use qig_core::{MetricKind, ScalarFunctionSpec};

fn spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral");
    for n in DIMS {
        let (a, b, h) = fixture(n);
        g.bench_with_input(BenchmarkId::new("eig_hermitian", n), &n, |bch, _| {
            bch.iter(|| eig_hermitian(black_box(a.matrix())).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("frechet_sqrt", n), &n, |bch, _| {
            bch.iter(|| frechet_derivative(&ScalarFunctionSpec::Sqrt, black_box(&a), black_box(&h)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("geometric_mean", n), &n, |bch, _| {
            bch.iter(|| geometric_mean(black_box(&a), black_box(&b)).unwrap())
        });
    }
    g.finish();
}

fn metrics(c: &mut Criterion) {
    let mut g = c.benchmark_group("metric_eval");
    let (a, _, h) = fixture(8);
    for m in [MetricKind::Bures, MetricKind::Bkm, MetricKind::wyd(0.5).unwrap()] {
        g.bench_function(m.to_string(), |bch| bch.iter(|| metric_eval(&m, black_box(&a), &h, &h).unwrap()));
    }
    g.finish();
}

fn distances(c: &mut Criterion) {
    let mut g = c.benchmark_group("distances");
    for n in DIMS {
        let (a, b, _) = fixture(n);
        g.bench_with_input(BenchmarkId::new("bures_cone", n), &n, |bch, _| {
            bch.iter(|| bures_distance_cone(black_box(&a), black_box(&b)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("rld_upper_cone", n), &n, |bch, _| {
            bch.iter(|| rld_upper_bound_cone(black_box(&a), black_box(&b)).unwrap())
        });
    }
    g.finish();
}

fn lengths(c: &mut Criterion) {
    let mut g = c.benchmark_group("curve_length");
    g.sample_size(10);
    let (a, b, _) = fixture(4);
    let curve = CurveSpec::new(CurveKind::RldDual, a, b, false).unwrap();
    for panels in [256, 1024] {
        g.bench_with_input(BenchmarkId::new("rld_dual", panels), &panels, |bch, &p| {
            bch.iter(|| curve_length(&MetricKind::Rld, &curve, p).unwrap())
        });
    }
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    g.bench_function("monotonicity_x32", |bch| bch.iter(|| run_suite(Suite::Monotonicity, 32, 1)));
    g.finish();
}

criterion_group!(benches, spectral, metrics, distances, lengths, suites);
criterion_main!(benches);

//! Engine benchmarks. Run `cargo bench -p radk` for the rayon-parallel
//! build and `cargo bench -p radk --no-default-features` for the sequential
//! fallback; criterion's saved baselines make the two directly comparable
//! (`--save-baseline parallel` / `--save-baseline sequential`).

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use radk::experiment::{run_experiment, ExperimentConfig, ExperimentId};
use radk::kfunc::{self, KCurve};
use radk::rademacher;
use radk::Sequence;

fn gaussian(n: usize, seed: u64) -> Sequence {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Sequence::new(
        (0..n)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect(),
    )
    .unwrap()
}

fn bench_synthesize_exact(c: &mut Criterion) {
    let a = gaussian(12, 1);
    c.bench_function("synthesize_exact n=12", |b| {
        b.iter(|| rademacher::synthesize_exact(&a).unwrap())
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let a = gaussian(64, 2);
    c.bench_function("sample_monte_carlo n=64 samples=2^16", |b| {
        b.iter(|| rademacher::sample_monte_carlo(&a, 1 << 16, 7))
    });
}

fn bench_k_l1_l2_seq(c: &mut Criterion) {
    let a = gaussian(1024, 3);
    c.bench_function("k_l1_l2_seq n=1024", |b| {
        b.iter(|| kfunc::k_l1_l2_seq(&a, 5.5))
    });
}

fn bench_k_linf_g_curve(c: &mut Criterion) {
    let a = gaussian(10, 4);
    let x = rademacher::synthesize_exact(&a).unwrap().as_step;
    let grid = KCurve::log_grid(2f64.powi(-4), 2f64.powi(6), 64);
    c.bench_function("k_linf_g curve 64pts, 1024-piece x*", |b| {
        b.iter_batched(
            || grid.clone(),
            |g| KCurve::evaluate("(L∞,G)", g, |t| kfunc::k_linf_g(&x, t)),
            BatchSize::SmallInput,
        )
    });
}

fn bench_theorem1_experiment(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::default_for(ExperimentId::Theorem1);
    cfg.n = 8;
    cfg.samples = 16;
    cfg.t_grid.points = 17;
    cfg.seed = Some(5);
    c.bench_function("run_experiment theorem1 16x17", |b| {
        b.iter(|| run_experiment(&cfg).unwrap())
    });
}

fn bench_montgomery(c: &mut Criterion) {
    let a = gaussian(12, 6);
    let grid: Vec<f64> = (0..25).map(|i| 0.1 * (40f64).powf(i as f64 / 24.0)).collect();
    c.bench_function("montgomery_smith_min_a n=12", |b| {
        b.iter(|| rademacher::montgomery_smith_min_a(&a, &grid, 16.0).unwrap())
    });
}

criterion_group!(
    benches,
    bench_synthesize_exact,
    bench_monte_carlo,
    bench_k_l1_l2_seq,
    bench_k_linf_g_curve,
    bench_theorem1_experiment,
    bench_montgomery
);
criterion_main!(benches);

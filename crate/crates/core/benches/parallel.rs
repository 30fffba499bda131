//! Default rayon pool against a single-thread pool on the heavy verifiers.
//! Build with `--no-default-features` to time the plain iterator fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flockgq::blt::linear_blt;
use flockgq::field::GaloisField;
use flockgq::knarr::{gq_verify, KnarrModel};
use flockgq::pqgraph::{point_graph, srg_check};

fn model(q: u32) -> KnarrModel {
    let f = GaloisField::new(q, 1, None).unwrap();
    KnarrModel::from_blt(&linear_blt(&f).unwrap().standardize().unwrap()).unwrap()
}

#[cfg(feature = "parallel")]
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", single), ("default", default)]
}

#[cfg(feature = "parallel")]
fn run<R: Send>(c: &mut Criterion, name: &str, f: impl Fn() -> R + Sync) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(label), |b| b.iter(|| pool.install(&f)));
    }
    group.finish();
}

#[cfg(not(feature = "parallel"))]
fn run<R>(c: &mut Criterion, name: &str, f: impl Fn() -> R) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    group.bench_function(BenchmarkId::from_parameter("sequential"), |b| b.iter(&f));
    group.finish();
}

fn benches(c: &mut Criterion) {
    let m5 = model(5);
    run(c, "gq_verify_q5", || gq_verify(&m5.gq).passed());
    let dual = point_graph(&m5.gq.dualize());
    run(c, "srg_check_dual_q5", || srg_check(&dual).is_ok());
    run(c, "knarr_build_q5", || model(5).gq.num_lines());
}

criterion_group!(parallel, benches);
criterion_main!(parallel);

//! Hot-kernel benchmarks comparing the default rayon pool against a
//! single-thread pool. Rows under ~64 KiB stay sequential regardless, so the
//! small sizes here double as a check that the dispatch threshold is sane.
//! Build with `--no-default-features` to bench the pure sequential path with
//! no pool in the loop at all.

use std::hint::black_box;
use std::time::Duration;

use criterion::measurement::WallTime;
use criterion::{criterion_group, criterion_main, BenchmarkGroup, BenchmarkId, Criterion};
use floq::clifford::GateSpec;
use floq::connectivity::Rule;
use floq::floquet::FloquetCircuit;
use floq::gf2::BitMatrix;
use floq::hp::recovery_scan;
use floq::lattice::Layout;

fn circuit(n: usize, double: bool) -> FloquetCircuit {
    let layout = if double {
        Layout::double(n)
    } else {
        Layout::single(n)
    }
    .unwrap();
    FloquetCircuit::new(layout, Rule::Rule2, GateSpec::w()).unwrap()
}

/// Dense square GF(2) matrix with real circuit structure: the one-step map
/// raised to the 8th power, by which point most entries are populated.
fn dense_step_power(c: &FloquetCircuit) -> BitMatrix {
    let mut m = c.step_map().matrix().clone();
    for _ in 0..3 {
        m = m.mul(&m);
    }
    m
}

/// Benchmark `f` on the default pool and again pinned to one thread. With
/// the `parallel` feature off there is only the plain sequential run.
#[cfg(feature = "parallel")]
fn with_pools<T: Send>(
    group: &mut BenchmarkGroup<WallTime>,
    param: &str,
    f: impl Fn() -> T + Sync,
) {
    group.bench_function(BenchmarkId::new(param, "default-pool"), |b| {
        b.iter(|| black_box(f()))
    });
    let solo = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    group.bench_function(BenchmarkId::new(param, "one-thread"), |b| {
        b.iter(|| black_box(solo.install(&f)))
    });
}

#[cfg(not(feature = "parallel"))]
fn with_pools<T: Send>(
    group: &mut BenchmarkGroup<WallTime>,
    param: &str,
    f: impl Fn() -> T + Sync,
) {
    group.bench_function(BenchmarkId::new(param, "sequential"), |b| {
        b.iter(|| black_box(f()))
    });
}

/// (N, double-layer?) cases spanning both sides of the parallel dispatch
/// threshold: 512 and 2048/2304 binary dimensions.
const SIZES: [(usize, bool); 3] = [(16, false), (32, false), (24, true)];

fn bench_matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("matmul");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(2));
    for (n, double) in SIZES {
        let m = dense_step_power(&circuit(n, double));
        with_pools(&mut group, &m.rows().to_string(), || m.mul(&m));
    }
    group.finish();
}

fn bench_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(2));
    for (n, double) in SIZES {
        let m = dense_step_power(&circuit(n, double));
        with_pools(&mut group, &m.rows().to_string(), || m.rank());
    }
    group.finish();
}

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("basis-step");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(2));
    for (n, double) in SIZES {
        let circ = circuit(n, double);
        let total = circ.total_qubits();
        let basis = circ.evolve_matrix(&BitMatrix::identity(2 * total), 10);
        with_pools(&mut group, &(2 * total).to_string(), || {
            circ.step_matrix(&basis)
        });
    }
    group.finish();
}

fn bench_recovery_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("recovery-scan");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(3));
    let circ = circuit(12, true);
    with_pools(&mut group, "288q-4cells", || {
        recovery_scan(&circ, &[0, 100], &[48, 96], 10).unwrap()
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_matmul,
    bench_rank,
    bench_step,
    bench_recovery_scan
);
criterion_main!(benches);

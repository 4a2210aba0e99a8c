//! Parallel searches against the same code on a one-thread pool.
//! `cargo bench -p ptr-forge --bench search`

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ptr_forge::collineation::transitivity_profile;
use ptr_forge::coord::find_fano_direct;
use ptr_forge::field::field_for_order;
use ptr_forge::plane::{desargues_witness, desarguesian_plane};
use ptr_forge::properties::check_ptr_properties;
use ptr_forge::ternary::TernaryTable;
use rayon::{ThreadPool, ThreadPoolBuilder};

fn pools() -> [(&'static str, ThreadPool); 2] {
    [
        ("sequential", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("parallel", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn searches(c: &mut Criterion) {
    let pg7 = desarguesian_plane(&field_for_order(7).unwrap());
    let pg8 = desarguesian_plane(&field_for_order(8).unwrap());
    let f9 = field_for_order(9).unwrap();
    let pg9 = desarguesian_plane(&f9);
    let table9 = TernaryTable::linear_field(&f9);

    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new("desargues PG(2,7)", name), |b| {
            b.iter(|| pool.install(|| desargues_witness(&pg7)))
        });
        g.bench_function(BenchmarkId::new("fano PG(2,9)", name), |b| {
            b.iter(|| pool.install(|| find_fano_direct(&pg9)))
        });
        g.bench_function(BenchmarkId::new("transitivity PG(2,8)", name), |b| {
            b.iter(|| pool.install(|| transitivity_profile(&pg8, None, false)))
        });
        g.bench_function(BenchmarkId::new("ptr properties q=9", name), |b| {
            b.iter(|| pool.install(|| check_ptr_properties(&table9)))
        });
    }
    g.finish();
}

criterion_group!(benches, searches);
criterion_main!(benches);

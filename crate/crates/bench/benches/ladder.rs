use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use strat_ic::ic::{deligne_construction, stratified_de_rham, Perversity};
use strat_ic::space::example;

const SPACES: &[&str] = &["cone-s1", "cone-torus", "genus2-cone", "suspension-torus"];

fn ladder(c: &mut Criterion) {
    let mut group = c.benchmark_group("ladder");
    group.sample_size(10);
    for name in SPACES {
        let s = example(name).unwrap();
        group.bench_with_input(BenchmarkId::new("deligne", name), &s, |b, s| {
            b.iter(|| deligne_construction(black_box(s), &Perversity::lower_middle()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("de-rham", name), &s, |b, s| b.iter(|| stratified_de_rham(black_box(s)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, ladder);
criterion_main!(benches);

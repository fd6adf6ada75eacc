use criterion::{criterion_group, criterion_main, Criterion};
use gbs_bench::workloads;
use gbs_core::canonical_form;
use gbs_core::fixtures::{na3, refinement_fixtures};
use gbs_core::search::{classify_space, slide_path_via_refinement};

fn canonical_forms(c: &mut Criterion) {
    let g = na3();
    c.bench_function("canonical_form/na3", |b| b.iter(|| canonical_form(&g).unwrap()));
}

fn closures(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_space");
    group.sample_size(10);
    for (name, g, bounds) in workloads() {
        group.bench_function(name, |b| b.iter(|| classify_space(&g, &bounds).unwrap()));
    }
    group.finish();
}

fn refinement(c: &mut Criterion) {
    let fixtures = refinement_fixtures();
    c.bench_function("slide_path_via_refinement", |b| {
        b.iter(|| {
            for f in &fixtures {
                slide_path_via_refinement(&f.theta, &f.f1, &f.f2).unwrap();
            }
        })
    });
}

criterion_group!(benches, canonical_forms, closures, refinement);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tevl_bench::{acoustic_ball, dirac, plate};
use tevl_core::galerkin::{assemble_forms, min_eig_path, qep_solve};
use tevl_core::radial::{det_biharmonic, find_roots, RootOptions};

fn determinants(c: &mut Criterion) {
    let p = plate();
    c.bench_function("det_biharmonic k=1e4", |b| b.iter(|| det_biharmonic(&p, black_box(1.0e4))));
}

fn roots(c: &mut Criterion) {
    let (d, p) = (dirac(), plate());
    let opts = RootOptions::default();
    c.bench_function("find_roots dirac (0.5, 100]", |b| b.iter(|| find_roots(&d, black_box((0.5, 100.0)), &opts)));
    c.bench_function("find_roots biharmonic k in (1e4, 1.2e4)", |b| {
        b.iter(|| find_roots(&p, black_box((1.0e4, 1.2e4)), &opts))
    });
}

fn pencil(c: &mut Criterion) {
    let mut g = c.benchmark_group("pencil");
    g.sample_size(20);
    for n in [16, 32] {
        let cfg = acoustic_ball(n);
        g.bench_function(format!("assemble N={n}"), |b| b.iter(|| assemble_forms(black_box(&cfg))));
        let f = assemble_forms(&cfg).unwrap();
        g.bench_function(format!("min_eig_path N={n}"), |b| b.iter(|| min_eig_path(&f, 0.0, 80.0, 0.25)));
        g.bench_function(format!("qep_solve N={n}"), |b| b.iter(|| qep_solve(&f)));
    }
    g.finish();
}

criterion_group!(benches, determinants, roots, pencil);
criterion_main!(benches);

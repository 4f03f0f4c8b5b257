use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use eow_bench::kernel_grid_1d;
use eow_core::kernels::{kernel_table, KernelSpec};
use eow_core::C64;

fn kernels(c: &mut Criterion) {
    let closed = KernelSpec::closed_form(1.0).unwrap();
    let quad1 = KernelSpec::quadrature(1, 1.0).unwrap();
    let quad2 = KernelSpec::quadrature(2, 1.0).unwrap();
    let quad3 = KernelSpec::quadrature(3, 1.0).unwrap();
    let z1 = [C64::new(2.5, 0.4)];
    let z2 = [C64::new(1.0, 0.2), C64::new(-0.5, 0.1)];
    let z3 = [C64::new(0.5, 0.1), C64::new(-0.3, 0.0), C64::new(0.2, 0.1)];
    // Build the weight tables outside the timed loops.
    for (spec, z) in [(&quad1, &z1[..]), (&quad2, &z2[..]), (&quad3, &z3[..])] {
        spec.eval(z).unwrap();
    }

    c.bench_function("closed form n=1", |b| b.iter(|| closed.eval(black_box(&z1)).unwrap()));
    c.bench_function("quadrature n=1", |b| b.iter(|| quad1.eval(black_box(&z1)).unwrap()));
    c.bench_function("quadrature n=2", |b| b.iter(|| quad2.eval(black_box(&z2)).unwrap()));
    let mut slow = c.benchmark_group("slow");
    slow.sample_size(10);
    slow.bench_function("quadrature n=3", |b| b.iter(|| quad3.eval(black_box(&z3)).unwrap()));
    let grid = kernel_grid_1d();
    slow.bench_function("quadrature n=1 grid", |b| {
        b.iter(|| kernel_table(&quad1, black_box(&grid)).unwrap())
    });
    slow.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);

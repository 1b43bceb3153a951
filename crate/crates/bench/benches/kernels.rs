//! Benchmarks for the hot kernels: class-number scans, two-variable
//! series multiplication, and the meromorphic index-1 expansion.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mockjac_core::bridge::{psi_index1, BridgeParams};
use mockjac_core::classical::{jacobi_theta1_rationalized, theta_mr};
use mockjac_core::qf::{hurwitz_class_number_level, reduced_forms};
use mockjac_core::rational::rat;
use mockjac_core::series::Convention;

fn bench_class_numbers(c: &mut Criterion) {
    c.bench_function("reduced_forms scan |d| <= 400", |b| {
        b.iter(|| {
            let mut count = 0usize;
            for d in -400i64..0 {
                if d % 4 == 0 || d.rem_euclid(4) == 1 {
                    count += reduced_forms(black_box(d)).len();
                }
            }
            count
        })
    });
    c.bench_function("level-5 class numbers |d| <= 200", |b| {
        b.iter(|| {
            let mut acc = rat(0);
            for d in -200i64..0 {
                if d % 4 == 0 || d.rem_euclid(4) == 1 {
                    acc += hurwitz_class_number_level(5, black_box(d));
                }
            }
            acc
        })
    });
}

fn bench_series_mul(c: &mut Criterion) {
    let theta = jacobi_theta1_rationalized(16, Convention::AnnulusQltYlt1);
    c.bench_function("theta1^2 (q-order 16)", |b| {
        b.iter(|| black_box(&theta).mul(black_box(&theta)).unwrap())
    });
    let t30 = theta_mr(1, 0, 30, Convention::FinitePolynomial);
    c.bench_function("theta_{1,0}^2 (q-order 30)", |b| {
        b.iter(|| black_box(&t30).mul(black_box(&t30)).unwrap())
    });
}

fn bench_psi_expansion(c: &mut Criterion) {
    c.bench_function("index-1 meromorphic form (q-order 10)", |b| {
        b.iter(|| psi_index1(BridgeParams { q_max: 10, y_window: 36 }).unwrap())
    });
}

criterion_group!(benches, bench_class_numbers, bench_series_mul, bench_psi_expansion);
criterion_main!(benches);

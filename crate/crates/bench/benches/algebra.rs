use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hallp1::drinfeld::{iso_check, v_normal_form};
use hallp1::hall_global::{hall_product_classes, normal_form, SheafClass};
use hallp1::hall_torsion::GlobalSeries;
use hallp1::oracle::{submodule_type_counts, OracleBudget};
use hallp1::pbw::Gen;
use hallp1::symfun::local_product;
use hallp1::{GroundConfig, Partition};

fn ground(q: u32) -> GroundConfig {
    GroundConfig::new(q).unwrap()
}

fn hall_numbers(c: &mut Criterion) {
    // local_product caches, so vary qx to keep each iteration cold
    let mu = Partition::new(vec![3, 2, 1]);
    let nu = Partition::new(vec![2, 1]);
    let mut qx = 1u64;
    c.bench_function("local_product [3,2,1]·[2,1]", |b| {
        b.iter(|| {
            qx += 1;
            local_product(black_box(&mu), black_box(&nu), qx).unwrap()
        })
    });
    let k = ground(2);
    c.bench_function("hall product [O(4)][O(0)], q=2", |b| {
        b.iter(|| hall_product_classes(k, black_box(&SheafClass::line(4)), &SheafClass::line(0)).unwrap())
    });
    let lam = Partition::new(vec![2, 1, 1]);
    c.bench_function("submodule counts of type [2,1,1], q=2", |b| {
        b.iter(|| submodule_type_counts(k, black_box(&lam), &OracleBudget::default()).unwrap())
    });
}

fn normal_forms(c: &mut Criterion) {
    let k = ground(3);
    let word = [Gen::Tor(3), Gen::Line(2), Gen::Tor(1), Gen::Line(0), Gen::Line(-2), Gen::Line(1)];
    c.bench_function("hall normal form, 6 letters, q=3", |b| {
        b.iter(|| normal_form(k, k.one(), black_box(&word)).unwrap())
    });
    c.bench_function("V⁺ normal form, 6 letters, q=3", |b| {
        b.iter(|| v_normal_form(k, k.one(), black_box(&word)).unwrap())
    });
}

fn series_and_iso(c: &mut Criterion) {
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("global series to order 5, q=2", |b| {
        b.iter(|| GlobalSeries::compute(ground(2), black_box(5)).unwrap())
    });
    group.bench_function("iso_check(3), q=2", |b| b.iter(|| iso_check(ground(2), black_box(3)).unwrap()));
    group.finish();
}

criterion_group!(benches, hall_numbers, normal_forms, series_and_iso);
criterion_main!(benches);

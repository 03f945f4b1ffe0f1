use criterion::{criterion_group, criterion_main, Criterion};

use cosetal_core::{
    abelian_group_witness, classify, cohomology_group, congruence_closure, fixtures,
    oracle_enumerate_cosetal_extensions, wact_poset, Caps,
};

fn bench_wact(c: &mut Criterion) {
    let two = fixtures::two();
    let z2 = fixtures::z(2);
    let z4 = fixtures::z(4);
    c.bench_function("wact_two_z2", |b| b.iter(|| wact_poset(&two, &z2).unwrap()));
    c.bench_function("wact_two_z4", |b| b.iter(|| wact_poset(&two, &z4).unwrap()));
}

fn bench_cohomology(c: &mut Criterion) {
    let poset = wact_poset(&fixtures::z(2), &fixtures::z(2)).unwrap();
    let w = abelian_group_witness(&fixtures::z(2)).unwrap();
    let pair = poset.pairs[0].clone();
    c.bench_function("cohomology_z2_z2", |b| {
        b.iter(|| cohomology_group(&pair, &w).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let two = fixtures::two();
    let z2 = fixtures::z(2);
    let w = abelian_group_witness(&z2).unwrap();
    let caps = Caps::default();
    c.bench_function("oracle_census_two_z2", |b| {
        b.iter(|| oracle_enumerate_cosetal_extensions(&two, &z2, &w, &caps).unwrap())
    });
}

fn bench_classify(c: &mut Criterion) {
    let two = fixtures::two();
    let z2 = fixtures::z(2);
    let caps = Caps::default();
    c.bench_function("classify_two_z2", |b| {
        b.iter(|| classify(&two, &z2, &caps).unwrap())
    });
}

fn bench_congruence(c: &mut Criterion) {
    let s3 = fixtures::s3();
    c.bench_function("congruence_closure_s3", |b| {
        b.iter(|| congruence_closure(&s3, &[(1, 0)]).unwrap())
    });
}

criterion_group!(
    benches,
    bench_wact,
    bench_cohomology,
    bench_oracle,
    bench_classify,
    bench_congruence
);
criterion_main!(benches);

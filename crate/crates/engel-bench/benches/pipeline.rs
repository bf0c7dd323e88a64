use criterion::{criterion_group, criterion_main, Criterion};
use engel_core::engel::build_relation_matrix;
use engel_core::exactla::{certify_full_rank_random, rank_mod_p, IntMatrix};
use engel_core::freelie::{even_generators, generators, Parity};
use engel_core::superalg::SuperAlgebra;

fn bench_basis(c: &mut Criterion) {
    c.bench_function("basis/3-gen-weight-8", |b| {
        let gens = even_generators(3);
        b.iter(|| {
            engel_core::freelie::enumerate_basic(&gens, 8, None)
                .unwrap()
                .len()
        })
    });
}

fn bench_structure_table(c: &mut Criterion) {
    c.bench_function("collect/2-gen-class-8-table", |b| {
        let gens = even_generators(2);
        b.iter(|| {
            let alg = SuperAlgebra::new(&gens, 8, None).unwrap();
            alg.build_structure_table()
        })
    });
    c.bench_function("collect/oe-class-7-table", |b| {
        let gens = generators(&[Parity::Odd, Parity::Even]);
        b.iter(|| {
            let alg = SuperAlgebra::new(&gens, 7, None).unwrap();
            alg.build_structure_table()
        })
    });
}

fn bench_relmat(c: &mut Criterion) {
    c.bench_function("relmat/oe-4-3-component", |b| {
        let gens = generators(&[Parity::Odd, Parity::Even]);
        let alg = SuperAlgebra::new(&gens, 7, Some(&[4, 3])).unwrap();
        b.iter(|| build_relation_matrix(&alg, &[4, 3], 5, false).unwrap().rows.len())
    });
}

fn bench_exactla(c: &mut Criterion) {
    let m = IntMatrix::diagonal(&(1..=40).map(|i| (i % 9) as i64 + 1).collect::<Vec<_>>());
    c.bench_function("exactla/rank-mod-11-40x40", |b| {
        b.iter(|| rank_mod_p(&m, 11).unwrap())
    });
    c.bench_function("exactla/certify-40x40", |b| {
        b.iter(|| certify_full_rank_random(&m, &[2, 3, 5, 7], 2, 1).unwrap())
    });
}

criterion_group!(
    benches,
    bench_basis,
    bench_structure_table,
    bench_relmat,
    bench_exactla
);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;
use tropica_core::curve::chip_fire;
use tropica_core::embed::{check_injectivity, line_example, psi_apply};
use tropica_core::random;
use tropica_core::variety::variety_cells;

fn polys(c: &mut Criterion) {
    let mut r = random::rng(1);
    let ps: Vec<_> = (0..32).map(|_| random::poly(&mut r, 2, 8, 4)).collect();
    c.bench_function("canonicalize 2 vars 8 terms", |b| {
        b.iter(|| ps.iter().map(|p| black_box(p.canonicalize()).len()).sum::<usize>())
    });
    let pairs: Vec<_> = ps.iter().map(|p| (p.clone(), p.canonicalize())).collect();
    c.bench_function("fn_equal equal pairs", |b| {
        b.iter(|| pairs.iter().filter(|(p, q)| black_box(p.fn_equal(q)).is_equal()).count())
    });
}

fn varieties(c: &mut Criterion) {
    let mut r = random::rng(2);
    let es: Vec<_> = (0..8).map(|_| random::presentation(&mut r, 2, 2)).collect();
    c.bench_function("variety_cells 2 generators", |b| {
        b.iter(|| es.iter().map(|e| variety_cells(e).unwrap().cells.len()).sum::<usize>())
    });
}

fn curves(c: &mut Criterion) {
    let mut r = random::rng(3);
    let cases: Vec<_> = (0..8)
        .map(|_| {
            let g = random::curve(&mut r, 8, true);
            let s = random::subgraph(&mut r, &g);
            let l = random::firing_length(&mut r);
            (g, s, l)
        })
        .collect();
    c.bench_function("chip_fire 8 edges", |b| {
        b.iter(|| {
            for (g, s, l) in &cases {
                black_box(chip_fire(g, s, l).unwrap());
            }
        })
    });
}

fn embeddings(c: &mut Criterion) {
    let mut r = random::rng(4);
    let g = random::curve(&mut r, 6, false);
    let gens = random::generator_tuple(&mut r, &g, 3);
    let fs: Vec<_> = (0..16).map(|_| random::ratfn(&mut r, 3)).collect();
    c.bench_function("psi_apply 3 generators", |b| {
        b.iter(|| {
            for f in &fs {
                black_box(psi_apply(f, &gens).unwrap());
            }
        })
    });
    let line = line_example();
    c.bench_function("check_injectivity line", |b| {
        b.iter_batched(|| line.clone(), |t| check_injectivity(&t), BatchSize::SmallInput)
    });
    c.bench_function("check_injectivity random", |b| b.iter(|| check_injectivity(&gens)));
}

criterion_group!(benches, polys, varieties, curves, embeddings);
criterion_main!(benches);

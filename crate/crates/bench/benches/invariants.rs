use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dehn_bench::{piped_sphere, sphere, torus};
use dehn_core::group::h1_sigma;
use dehn_core::*;

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariants");
    for n in [0, 2, 4] {
        let d = piped_sphere(n);
        let id = format!("q{}", d.triple_points());
        g.bench_with_input(BenchmarkId::new("validate", &id), &d, |b, d| {
            b.iter(|| validate(black_box(d), Mode::Strict))
        });
        g.bench_with_input(BenchmarkId::new("h1_sigma", &id), &d, |b, d| {
            b.iter(|| h1_sigma(black_box(d), Ring::Z).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("h1_paper", &id), &d, |b, d| {
            b.iter(|| h1_paper(black_box(d), Ring::Z).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("certify", &id), &d, |b, d| {
            b.iter(|| certify(black_box(d)).unwrap())
        });
    }
    g.finish();
}

fn groups(c: &mut Criterion) {
    let d = sphere();
    let cw = pi1_cw(&build_quotient(&d).unwrap());
    let paper = pi1_paper(&d).unwrap();
    let s3 = FiniteGroup::symmetric3();
    c.bench_function("homs/cw_to_s3", |b| {
        b.iter(|| count_homs(black_box(&cw), &s3).unwrap())
    });
    c.bench_function("homs/paper_to_s3", |b| {
        b.iter(|| count_homs(black_box(&paper), &s3).unwrap())
    });
    c.bench_function("agree/sphere", |b| {
        b.iter(|| presentations_agree(&cw, &paper))
    });
}

fn constructions(c: &mut Criterion) {
    let d = torus();
    let p = pi1_paper(&d).unwrap();
    let z3 = FiniteGroup::cyclic(3);
    let mut images = None;
    dehn_core::group::for_each_hom(&p, &z3, |img| {
        images = Some(img.to_vec());
        img.iter().all(|&x| x == z3.identity)
    })
    .unwrap();
    let rep = PermRep::from_hom(&p, &z3, &images.unwrap()).unwrap();
    c.bench_function("lift/torus_z3", |b| {
        b.iter(|| lift_diagram(black_box(&d), &rep).unwrap())
    });
    let s = sphere();
    c.bench_function("pipe/sphere", |b| {
        b.iter(|| handle_pipe(black_box(&s), 0, PipeChoice::default()).unwrap())
    });
    c.bench_function("enumerate/q1", |b| {
        b.iter(|| enumerate(&EnumSpec::new(1)).unwrap())
    });
}

criterion_group!(benches, invariants, groups, constructions);
criterion_main!(benches);

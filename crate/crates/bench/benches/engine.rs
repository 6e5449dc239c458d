use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use purefull::catalog;
use purefull::families;
use purefull::lie::LieAlgebra;
use purefull::manifest::Loaded;
use purefull::purefull::check_pure_full;
use purefull::symplectic;

fn loaded(name: &str) -> Loaded {
    catalog::load(name).unwrap().load().unwrap()
}

/// Cohomology is cached per algebra, so each iteration starts from fresh structure equations.
fn fresh(l: &Loaded) -> LieAlgebra {
    LieAlgebra::with_letter(l.lie.structure().to_vec(), l.lie.letter()).unwrap()
}

fn cohomology(c: &mut Criterion) {
    for name in ["iwasawa", "solsol6", "torus6"] {
        let l = loaded(name);
        c.bench_function(&format!("betti/{name}"), |b| b.iter(|| black_box(fresh(&l).betti_numbers())));
    }
}

fn classification(c: &mut Criterion) {
    let l = loaded("nakamura");
    c.bench_function("pure_full/nakamura", |b| b.iter(|| black_box(check_pure_full(&fresh(&l), &l.acs["J"]))));
    let l = loaded("solsol6");
    c.bench_function("hard_lefschetz/solsol6", |b| b.iter(|| black_box(symplectic::hard_lefschetz(&fresh(&l), &l.forms["omega"]).unwrap())));
}

fn sweeps(c: &mut Criterion) {
    let l = loaded("nil3_B");
    c.bench_function("sweep/nil3_B/Jt", |b| b.iter(|| black_box(families::sweep(Some(&fresh(&l)), &l.families["Jt"]).unwrap())));
}

criterion_group!(benches, cohomology, classification, sweeps);
criterion_main!(benches);

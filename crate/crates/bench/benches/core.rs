use std::hint::black_box;

use boolprice::generators::{majority, random_function, switching_function};
use boolprice::harness::{competitive_ratio_exhaustive, Greedy};
use boolprice::lp::{build_lp, delta, make_family, solve_lp, FamilySpec};
use boolprice::proofs::CheapestProofIndex;
use boolprice::{BooleanFunction, CostVector};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn determination(c: &mut Criterion) {
    let f = random_function(10, &mut ChaCha8Rng::seed_from_u64(1));
    let table = f.table();
    c.bench_function("determination table n=10", |b| {
        b.iter_batched(
            || BooleanFunction::from_table(&table).unwrap(),
            |g| black_box(g.determination_table().unwrap().n()),
            BatchSize::SmallInput,
        )
    });
}

fn cheapest_proof(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_function(10, &mut rng);
    let costs = CostVector::random(10, &mut rng, 0);
    f.determination_table().unwrap();
    c.bench_function("cheapest-proof index n=10", |b| b.iter(|| black_box(CheapestProofIndex::new(&f, &costs).unwrap())));
}

fn lp(c: &mut Criterion) {
    let fam = make_family(FamilySpec::new(2, 2).unwrap()).unwrap();
    let lp = build_lp(&fam.function).unwrap();
    c.bench_function("leximin LP family(2,2)", |b| b.iter(|| black_box(solve_lp(&lp))));
    let g = switching_function();
    c.bench_function("delta g", |b| b.iter(|| black_box(delta(&g).unwrap())));
}

fn ratio(c: &mut Criterion) {
    let f = majority(9).unwrap();
    let costs = CostVector::random(9, &mut ChaCha8Rng::seed_from_u64(3), 0);
    c.bench_function("exhaustive greedy majority(9)", |b| {
        b.iter(|| black_box(competitive_ratio_exhaustive(|| Greedy::new(&costs), &f, &costs, false).unwrap()))
    });
}

criterion_group!(benches, determination, cheapest_proof, lp, ratio);
criterion_main!(benches);

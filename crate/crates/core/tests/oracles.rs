//! Brute-force oracles written independently of the library, checked
//! against the library on small instances.

use std::collections::BTreeSet;

use boolprice::generators::{random_function, switching_function};
use boolprice::harness::{competitive_ratio_exhaustive, Greedy};
use boolprice::lp::{build_lp, delta, make_family, solve_lp, FamilySpec};
use boolprice::proofs::{certificates, enumerate_proofs, proof_size_max};
use boolprice::quadratic::make_fstar;
use boolprice::rational::int;
use boolprice::{Assignment, BooleanFunction, CostVector, Ratio, Rational};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table(f: &BooleanFunction) -> Vec<bool> {
    (0..1u32 << f.n()).map(|b| f.eval(Assignment::new(f.n(), b))).collect()
}

/// Does fixing the variables in `mask` to their values in `sigma` force `t`?
fn forces(t: &[bool], n: usize, mask: u32, sigma: u32) -> bool {
    let want = t[sigma as usize];
    (0..1u32 << n).filter(|b| b & mask == sigma & mask).all(|b| t[b as usize] == want)
}

/// Distinct variable sets of minimal determining sets, over all assignments.
fn proof_sets(t: &[bool], n: usize) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for sigma in 0..1u32 << n {
        for mask in 0..1u32 << n {
            if forces(t, n, mask, sigma) && (0..n).filter(|v| mask >> v & 1 == 1).all(|v| !forces(t, n, mask & !(1 << v), sigma)) {
                out.insert(mask);
            }
        }
    }
    out
}

/// (k, l, PROOF): largest minterm, largest maxterm and largest proof.
fn sizes(t: &[bool], n: usize) -> (u32, u32, u32) {
    let (mut k, mut l, mut p) = (0, 0, 0);
    for sigma in 0..1u32 << n {
        for mask in 0..1u32 << n {
            if forces(t, n, mask, sigma) && (0..n).filter(|v| mask >> v & 1 == 1).all(|v| !forces(t, n, mask & !(1 << v), sigma)) {
                let size = mask.count_ones();
                p = p.max(size);
                if t[sigma as usize] {
                    k = k.max(size);
                } else {
                    l = l.max(size);
                }
            }
        }
    }
    (k, l, p)
}

fn cost_of(c: &CostVector, mask: u32) -> Rational {
    (0..c.n()).filter(|v| mask >> v & 1 == 1).fold(Rational::zero(), |acc, v| acc + c.get(v))
}

/// Worst ratio of "read the cheapest unread variable until forced",
/// smallest index first among equal costs.
fn greedy_ratio(t: &[bool], n: usize, c: &CostVector) -> Ratio {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| c.get(a).cmp(c.get(b)).then(a.cmp(&b)));
    let mut worst: Option<Ratio> = None;
    for sigma in 0..1u32 << n {
        let mut mask = 0u32;
        for &v in &order {
            if forces(t, n, mask, sigma) {
                break;
            }
            mask |= 1 << v;
        }
        let paid = cost_of(c, mask);
        let cheapest = (0..1u32 << n).filter(|&m| forces(t, n, m, sigma)).map(|m| cost_of(c, m)).min().unwrap();
        let r = Ratio::of(&paid, &cheapest);
        if worst.as_ref().is_none_or(|w| r > *w) {
            worst = Some(r);
        }
    }
    worst.unwrap()
}

/// Checks an LP solution against independently computed proof sets: the
/// primal covers every proof, and the dual attached to it is feasible with
/// the same objective, so the objective is the optimum.
fn certified_optimum(f: &BooleanFunction) -> Rational {
    let t = table(f);
    let n = f.n();
    let sets = proof_sets(&t, n);
    let lp = build_lp(f).unwrap();
    let sol = solve_lp(&lp);
    for &set in &sets {
        let covered = (0..n).filter(|v| set >> v & 1 == 1).fold(Rational::zero(), |acc, v| acc + &sol.s[v]);
        assert!(covered >= int(1), "{f:?}: proof {set:#b} covered {covered}");
    }
    assert_eq!(sol.dual.len(), lp.pruned.len());
    for (row, y) in lp.pruned.iter().zip(&sol.dual) {
        assert!(sets.contains(row), "{f:?}: dual row {row:#b} is not a proof");
        assert!(*y >= Rational::zero());
    }
    for v in 0..n {
        let load = lp.pruned.iter().zip(&sol.dual).filter(|(r, _)| *r >> v & 1 == 1).fold(Rational::zero(), |acc, (_, y)| acc + y);
        assert!(load <= int(1));
    }
    let primal = sol.s.iter().fold(Rational::zero(), |acc, x| acc + x);
    let dual = sol.dual.iter().fold(Rational::zero(), |acc, y| acc + y);
    assert_eq!(primal, dual);
    assert_eq!(primal, sol.objective);
    primal
}

/// Δ by direct enumeration of partial assignments, restricting tables by
/// hand.
fn delta_oracle(f: &BooleanFunction) -> Rational {
    let n = f.n();
    let t = table(f);
    let mut best = Rational::zero();
    for mask in 0..(1u32 << n) - 1 {
        for values in 0..1u32 << n {
            if values & !mask != 0 {
                continue;
            }
            let free: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 0).collect();
            let sub: Vec<bool> = (0..1u32 << free.len())
                .map(|b| {
                    let full = free.iter().enumerate().fold(values, |acc, (i, &v)| acc | ((b >> i & 1) << v));
                    t[full as usize]
                })
                .collect();
            let g = BooleanFunction::from_table(&sub).unwrap();
            if !g.is_constant() {
                best = best.max(certified_optimum(&g));
            }
        }
    }
    best
}

#[test]
fn proof_sets_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let f = random_function(n, &mut rng);
        let expected: Vec<u32> = {
            let mut v: Vec<u32> = proof_sets(&table(&f), n).into_iter().collect();
            v.sort_by_key(|m| (m.count_ones(), *m));
            v
        };
        assert_eq!(enumerate_proofs(&f).unwrap().var_sets, expected, "{f:?}");
    }
}

#[test]
fn fstar_certificate_sizes() {
    // k(f*) = 2 and l(f*) = 2s
    for s in 1..=3usize {
        let f = make_fstar(s).unwrap().to_function().unwrap();
        let (k, l, p) = sizes(&table(&f), f.n());
        assert_eq!((k, l), (2, 2 * s as u32));
        let certs = certificates(&f).unwrap();
        assert_eq!((certs.k(), certs.l()), (2, 2 * s));
        assert_eq!(proof_size_max(&f).unwrap(), p as usize);
    }
    let f = make_fstar(2).unwrap().to_function().unwrap();
    assert_eq!(proof_size_max(&f).unwrap(), 4);
}

#[test]
fn greedy_ratio_matches_independent_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let n = rand::Rng::gen_range(&mut rng, 2..=5);
        let f = random_function(n, &mut rng);
        let c = CostVector::random(n, &mut rng, 0);
        let r = competitive_ratio_exhaustive(|| Greedy::new(&c), &f, &c, false).unwrap();
        assert_eq!(r.ratio, greedy_ratio(&table(&f), n, &c), "{f:?} c={c}");
    }
}

#[test]
fn lp_optimum_is_certified_on_random_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let n = rand::Rng::gen_range(&mut rng, 2..=4);
        let f = random_function(n, &mut rng);
        let opt = certified_optimum(&f);
        assert!(opt <= int(proof_size_max(&f).unwrap() as i64));
    }
}

#[test]
fn delta_matches_oracle() {
    let g = switching_function();
    assert_eq!(delta_oracle(&g), int(3));
    assert_eq!(delta(&g).unwrap().value, int(3));
    assert_eq!(proof_size_max(&g).unwrap(), 4);

    let fam = make_family(FamilySpec::new(1, 1).unwrap()).unwrap();
    assert_eq!(delta_oracle(&fam.function), int(2));
    assert_eq!(delta(&fam.function).unwrap().value, int(2));

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let n = rand::Rng::gen_range(&mut rng, 2..=4);
        let f = random_function(n, &mut rng);
        assert_eq!(delta(&f).unwrap().value, delta_oracle(&f), "{f:?}");
    }
}

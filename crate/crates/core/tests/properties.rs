use boolprice::harness::{adversarial_ratio, competitive_ratio_exhaustive, run, Greedy};
use boolprice::lp::{build_lp, delta, lpa_evaluator, solve_lp, LpCache};
use boolprice::proofs::{cheapest_proof_cost_brute, certificates, enumerate_proofs, proof_size_max, CheapestProofIndex};
use boolprice::rational::{frac, int};
use boolprice::symmetric::{cheapest_proof_symmetric, gamma_c_formula, greedy_evaluator, symmetric_adversary};
use boolprice::{Assignment, BooleanFunction, CostVector, Dnf, PartialAssignment, Ratio, Rational, SymmetricProfile};
use proptest::prelude::*;

fn function(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(any::<bool>(), 1 << n)).prop_map(|t| BooleanFunction::from_table(&t).unwrap())
}

fn costs(n: usize) -> impl Strategy<Value = CostVector> {
    prop::collection::vec((0i64..=20, 1i64..=5), n)
        .prop_map(|v| CostVector::new(v.into_iter().map(|(p, q)| frac(p, q)).collect()).unwrap())
}

fn with_costs(max_n: usize) -> impl Strategy<Value = (BooleanFunction, CostVector)> {
    non_constant(max_n).prop_flat_map(|f| {
        let n = f.n();
        (Just(f), costs(n))
    })
}

fn profile(max_n: usize) -> impl Strategy<Value = SymmetricProfile> {
    (2..=max_n)
        .prop_flat_map(|n| prop::collection::vec(any::<bool>(), n + 1))
        .prop_filter("non-constant", |v| v.iter().any(|&b| b) && v.iter().any(|&b| !b))
        .prop_map(SymmetricProfile::new)
}

fn partial(n: usize) -> impl Strategy<Value = PartialAssignment> {
    prop::collection::vec(prop::option::of(any::<bool>()), n).prop_map(move |v| {
        let pairs: Vec<(usize, bool)> = v.iter().enumerate().filter_map(|(i, b)| b.map(|b| (i, b))).collect();
        PartialAssignment::from_pairs(n, &pairs).unwrap()
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn non_constant(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    function(max_n).prop_filter("non-constant", |f| !f.is_constant())
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn transcripts_are_consistent((f, c) in with_costs(6), bits in any::<u32>()) {
        let sigma = Assignment::new(f.n(), bits & ((1 << f.n()) - 1));
        let t = run(&mut Greedy::new(&c), &f, sigma, &c).unwrap();
        prop_assert!(t.is_consistent_with(&f));
        prop_assert_eq!(t.final_value, f.eval(sigma));
        let vars = t.read_vars();
        let mut dedup = vars.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), vars.len());
        let total = t.reads.iter().fold(int(0), |acc, r| acc + &r.cost);
        prop_assert_eq!(total, t.total_cost.clone());
        let mask = vars.iter().fold(0u32, |m, &v| m | 1 << v);
        prop_assert_eq!(f.is_determined_brute(&sigma.project(mask)), Some(f.eval(sigma)));
    }

    #[test]
    fn determination_table_matches_completion((f, p) in function(6).prop_flat_map(|f| { let n = f.n(); (Just(f), partial(n)) })) {
        prop_assert_eq!(f.is_determined(&p), f.is_determined_brute(&p));
    }

    #[test]
    fn restriction_commutes_with_evaluation((f, p) in function(6).prop_flat_map(|f| { let n = f.n(); (Just(f), partial(n)) }), bits in any::<u32>()) {
        prop_assume!(!p.is_full());
        let r = f.restrict(&p).unwrap();
        let free = Assignment::new(r.vars.len(), bits & ((1u32 << r.vars.len()) - 1));
        let mut full = 0u32;
        for (v, b) in p.iter() {
            full |= u32::from(b) << v;
        }
        for (local, &var) in r.vars.iter().enumerate() {
            full |= u32::from(free.get(local)) << var;
        }
        prop_assert_eq!(r.function.eval(free), f.eval(Assignment::new(f.n(), full)));
    }

    #[test]
    fn cheapest_proof_index_matches_brute((f, c) in with_costs(6), bits in any::<u32>()) {
        let sigma = Assignment::new(f.n(), bits & ((1 << f.n()) - 1));
        let index = CheapestProofIndex::new(&f, &c).unwrap();
        let (proof, cost) = index.query(sigma);
        prop_assert_eq!(cost.clone(), cheapest_proof_cost_brute(&f, sigma, &c));
        prop_assert_eq!(c.of_mask(proof.vars), cost.clone());
        prop_assert_eq!(f.is_determined_brute(&sigma.project(proof.vars)), Some(f.eval(sigma)));
    }

    #[test]
    fn every_minterm_meets_every_maxterm(f in non_constant(5)) {
        let certs = certificates(&f).unwrap();
        for m in &certs.minterms {
            for c in &certs.maxterms {
                prop_assert!(m.iter().any(|l| c.contains(l)), "{:?} and {:?} share no literal", m, c);
            }
        }
    }

    #[test]
    fn lp_solutions_are_certified(f in function(5)) {
        let lp = build_lp(&f).unwrap();
        let sol = solve_lp(&lp);
        prop_assert!(sol.certify(&lp));
        prop_assert!(sol.objective <= int(proof_size_max(&f).unwrap() as i64));
        prop_assert!(delta(&f).unwrap().value >= sol.objective);
    }

    #[test]
    fn lpa_respects_delta((f, c) in with_costs(4)) {
        let cache = LpCache::new();
        let r = competitive_ratio_exhaustive(|| lpa_evaluator(&f, &c, &cache).unwrap(), &f, &c, false).unwrap();
        prop_assert!(r.ratio <= Ratio::Finite(delta(&f).unwrap().value));
    }

    #[test]
    fn round_trips(f in function(6), c in costs(4)) {
        prop_assert_eq!(BooleanFunction::parse_table_file(&f.to_table_file()).unwrap(), f.clone());
        prop_assert_eq!(CostVector::from_json(&c.to_json(), 4).unwrap(), c);
    }

    #[test]
    fn dnf_text_round_trips(terms in prop::collection::vec(prop::collection::btree_map(0usize..6, any::<bool>(), 1..4), 1..5)) {
        let text: Vec<String> = terms
            .iter()
            .map(|t| t.iter().map(|(v, &neg)| format!("{}x{v}", if neg { "!" } else { "" })).collect::<Vec<_>>().join(" & "))
            .collect();
        let dnf = Dnf::parse(&format!("vars 6\n{}", text.join(" | "))).unwrap();
        let again = Dnf::parse(&format!("vars 6\n{dnf}")).unwrap();
        prop_assert_eq!(dnf.to_function().unwrap(), again.to_function().unwrap());
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn symmetric_formula_equals_exhaustive_and_adversary(p in profile(6), seed in any::<u64>()) {
        let c = CostVector::random(p.n(), &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed), 0);
        let f = p.to_function().unwrap();
        let formula = gamma_c_formula(&p, &c).unwrap();
        let exhaustive = competitive_ratio_exhaustive(|| greedy_evaluator(&c), &f, &c, false).unwrap();
        let mut adv = symmetric_adversary(&p, &c).unwrap();
        let (forced, _) = adversarial_ratio(&mut greedy_evaluator(&c), &f, &mut adv, &c).unwrap();
        prop_assert_eq!(&exhaustive.ratio, &formula);
        prop_assert_eq!(&forced.ratio, &formula);
    }

    #[test]
    fn symmetric_formula_ignores_variable_order(p in profile(7), c in costs(7), rot in 0usize..7) {
        let n = p.n();
        let c = CostVector::new(c.as_slice()[..n].to_vec()).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        prop_assert_eq!(gamma_c_formula(&p, &c).unwrap(), gamma_c_formula(&p, &c.permuted(&perm)).unwrap());
    }

    #[test]
    fn ratios_are_scale_invariant(p in profile(6), c in costs(6), num in 1i64..9, den in 1i64..9) {
        let n = p.n();
        let c = CostVector::new(c.as_slice()[..n].to_vec()).unwrap();
        let scaled = c.scaled(&frac(num, den)).unwrap();
        let f = p.to_function().unwrap();
        prop_assert_eq!(gamma_c_formula(&p, &c).unwrap(), gamma_c_formula(&p, &scaled).unwrap());
        let a = competitive_ratio_exhaustive(|| greedy_evaluator(&c), &f, &c, false).unwrap();
        let b = competitive_ratio_exhaustive(|| greedy_evaluator(&scaled), &f, &scaled, false).unwrap();
        prop_assert_eq!(a.ratio, b.ratio);
    }

    #[test]
    fn symmetric_cheapest_proof_matches_search(p in profile(7), c in costs(7), bits in any::<u32>()) {
        let n = p.n();
        let c = CostVector::new(c.as_slice()[..n].to_vec()).unwrap();
        let f = p.to_function().unwrap();
        let sigma = Assignment::new(n, bits & ((1 << n) - 1));
        let general: Rational = cheapest_proof_cost_brute(&f, sigma, &c);
        prop_assert_eq!(cheapest_proof_symmetric(&p, sigma, &c).unwrap(), general);
    }

    #[test]
    fn monotone_proofs_are_certificates(f in (1usize..=4).prop_flat_map(|n| {
        let all = boolprice::generators::all_monotone(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    }).prop_filter("non-constant", |f| !f.is_constant())) {
        let certs = certificates(&f).unwrap();
        let mut from_certs: Vec<u32> = certs
            .minterms
            .iter()
            .chain(&certs.maxterms)
            .map(|t| t.iter().fold(0u32, |m, l| m | 1 << l.var))
            .collect();
        from_certs.sort_by_key(|m| (m.count_ones(), *m));
        from_certs.dedup();
        prop_assert_eq!(enumerate_proofs(&f).unwrap().var_sets, from_certs);
    }
}

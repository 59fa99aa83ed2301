//! Batch verification suites. Every check is exact; a suite passes when
//! every one of its criteria does. Reports carry no timings, so the same
//! seed gives byte-identical JSON.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caps::Caps;
use crate::cost::CostVector;
use crate::dnf::Dnf;
use crate::error::{Error, Result};
use crate::function::{BooleanFunction, PartialAssignment};
use crate::generators;
use crate::harness::{adversarial_ratio, competitive_ratio_exhaustive, Greedy};
use crate::lp::{
    build_lp, delta, factored_adversary, factored_feasible_solution, lpa_evaluator, make_family,
    solve_lp, z_free_proofs_decompose, FactoredFunction, FamilySpec, LpCache,
};
use crate::proofs::proof_size_max;
use crate::quadratic::{
    bf2_algorithm, make_fstar, maxterm_survival_analysis, survival_adversary, CostMap,
};
use crate::rational::{frac, int, Ratio};
use crate::symmetric::{
    determined_symmetric, extremal_cost_vector, gamma_c_formula, greedy_evaluator, spread, symmetric_adversary,
    SymmetricProfile,
};

pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Symmetric,
    Quadratic,
    Lp,
    Factored,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Symmetric => &[1, 2, 3, 6],
            Suite::Quadratic => &[4, 5],
            Suite::Lp => &[7, 8],
            Suite::Factored => &[9],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Suite::Symmetric),
            "quadratic" => Ok(Suite::Quadratic),
            "lp" => Ok(Suite::Lp),
            "lemma2" | "factored" => Ok(Suite::Factored),
            "all" => Ok(Suite::All),
            _ => Err(Error::Invalid(format!("unknown suite {s:?}; expected symmetric, quadratic, lp, lemma2 or all"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Symmetric => "symmetric",
            Suite::Quadratic => "quadratic",
            Suite::Lp => "lp",
            Suite::Factored => "lemma2",
            Suite::All => "all",
        })
    }
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "symmetric closed form = greedy ratio = adversary ratio",
        2 => "closed form reaches the spread at the extremal costs and never exceeds it",
        3 => "parity: greedy and LPA ratio 1, PROOF = n",
        4 => "BF2 ratio on f* at most s+1",
        5 => "quadratic survivor bound and l/3 lower bound",
        6 => "count-based determination matches completion check",
        7 => "LP objective and delta against PROOF",
        8 => "LPA ratio at most delta",
        9 => "factored functions: delta = Gamma + k",
        10 => "deterministic reports",
        _ => "unknown",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapsEcho {
    pub table_n: usize,
    pub proof_n: usize,
    pub exhaustive_n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub suite: String,
    pub seed: u64,
    pub caps: CapsEcho,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

const MAX_FAILURES: usize = 5;

struct Check {
    id: u8,
    checks: u64,
    failed: u64,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new(id: u8) -> Self {
        Check { id, checks: 0, failed: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    /// Records an error from a computation that should have succeeded.
    fn ok<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.expect(false, || format!("{}: {e}", context()));
                None
            }
        }
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn finish(self) -> CriterionResult {
        let mut failures = self.failures;
        if self.failed as usize > failures.len() {
            failures.push(format!("... {} failures in total", self.failed));
        }
        CriterionResult {
            id: self.id,
            name: criterion_name(self.id),
            passed: self.failed == 0,
            checks: self.checks,
            failures,
            notes: self.notes,
        }
    }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(id));
    rng
}

/// Runs the criteria of `suite` with `seed`.
pub fn run_suite(suite: Suite, seed: u64) -> Report {
    run_criteria(suite, suite.criteria(), seed)
}

pub fn run_criteria(suite: Suite, ids: &[u8], seed: u64) -> Report {
    let caps = Caps::current();
    let mut criteria = Vec::new();
    let mut symmetric_pair: Option<(CriterionResult, CriterionResult)> = None;
    for &id in ids {
        let result = match id {
            1 | 2 => {
                let pair = symmetric_pair.get_or_insert_with(|| symmetric_ratio_suite(seed));
                if id == 1 { pair.0.clone() } else { pair.1.clone() }
            }
            3 => parity_suite(seed),
            4 => bf2_suite(seed),
            5 => quadratic_lower_bound_suite(seed),
            6 => count_determination_suite(),
            7 => lp_suite(seed),
            8 => lpa_suite(seed),
            9 => factored_suite(),
            _ => {
                let mut c = Check::new(id);
                c.expect(false, || format!("criterion {id} is not a suite criterion"));
                c.finish()
            }
        };
        criteria.push(result);
    }
    Report {
        version: env!("CARGO_PKG_VERSION"),
        suite: suite.to_string(),
        seed,
        caps: CapsEcho { table_n: caps.table_n, proof_n: caps.proof_n, exhaustive_n: caps.exhaustive_n },
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

/// All non-constant profiles on up to 7 variables, then 50 distinct
/// sampled ones on each of 8 and 9 variables.
fn symmetric_profile_set(rng: &mut ChaCha8Rng) -> Vec<(SymmetricProfile, usize)> {
    let mut out = Vec::new();
    for n in 1..=7 {
        out.extend(SymmetricProfile::all(n).filter(|p| !p.is_constant()).map(|p| (p, 5)));
    }
    for n in 8..=9 {
        let mut seen = BTreeSet::new();
        while seen.len() < 50 {
            let code: u64 = rng.gen_range(1..(1u64 << (n + 1)) - 1);
            if seen.insert(code) {
                out.push((SymmetricProfile::new((0..=n).map(|k| code >> k & 1 == 1).collect()), 10));
            }
        }
    }
    out
}

fn symmetric_ratio_suite(seed: u64) -> (CriterionResult, CriterionResult) {
    let mut rng = rng_for(seed, 1);
    let mut eq = Check::new(1);
    let mut spread_check = Check::new(2);
    let profiles = symmetric_profile_set(&mut rng);
    let mut cost_vectors = 0;
    for (p, count) in &profiles {
        let n = p.n();
        let Some(f) = eq.ok(p.to_function(), || format!("profile {p}")) else { continue };
        let s = spread(p);
        let spread_ratio = Ratio::Finite(int(s as i64));
        if let Some(ext) = spread_check.ok(extremal_cost_vector(p), || format!("profile {p}")) {
            let value = gamma_c_formula(p, &ext).expect("non-constant");
            spread_check.expect(value == spread_ratio, || format!("{p}: extremal value {value} != spread {s}"));
        }
        for _ in 0..*count {
            let c = CostVector::random(n, &mut rng, 0);
            cost_vectors += 1;
            let formula = gamma_c_formula(p, &c).expect("non-constant");
            spread_check.expect(formula <= spread_ratio, || format!("{p} c={c}: {formula} > spread {s}"));
            let exhaustive = competitive_ratio_exhaustive(|| greedy_evaluator(&c), &f, &c, false);
            let Some(exhaustive) = eq.ok(exhaustive, || format!("{p} c={c}")) else { continue };
            let forced = symmetric_adversary(p, &c)
                .and_then(|mut adv| adversarial_ratio(&mut greedy_evaluator(&c), &f, &mut adv, &c));
            let Some((forced, _)) = eq.ok(forced, || format!("{p} c={c}")) else { continue };
            eq.expect(exhaustive.ratio == formula && forced.ratio == formula, || {
                format!("{p} c={c}: exhaustive {} formula {formula} adversary {}", exhaustive.ratio, forced.ratio)
            });
        }
    }
    let note = format!("{} profiles, {cost_vectors} cost vectors", profiles.len());
    eq.note(note.clone());
    spread_check.note(note);
    (eq.finish(), spread_check.finish())
}

fn parity_suite(seed: u64) -> CriterionResult {
    let mut rng = rng_for(seed, 3);
    let mut check = Check::new(3);
    for n in 2..=10 {
        let Some(f) = check.ok(generators::parity(n), || format!("parity {n}")) else { continue };
        if let Some(proof) = check.ok(proof_size_max(&f), || format!("parity {n}")) {
            check.expect(proof == n, || format!("parity {n}: PROOF = {proof}"));
        }
        let cache = LpCache::new();
        for _ in 0..20 {
            let c = CostVector::random(n, &mut rng, 1);
            let greedy = competitive_ratio_exhaustive(|| Greedy::new(&c), &f, &c, false);
            if let Some(r) = check.ok(greedy, || format!("parity {n} greedy c={c}")) {
                check.expect(r.ratio == Ratio::one(), || format!("parity {n} greedy c={c}: {}", r.ratio));
            }
            let lpa = lpa_evaluator(&f, &c, &cache)
                .and_then(|_| competitive_ratio_exhaustive(|| lpa_evaluator(&f, &c, &cache).expect("checked"), &f, &c, false));
            if let Some(r) = check.ok(lpa, || format!("parity {n} LPA c={c}")) {
                check.expect(r.ratio == Ratio::one(), || format!("parity {n} LPA c={c}: {}", r.ratio));
            }
        }
    }
    check.finish()
}

fn bf2_suite(seed: u64) -> CriterionResult {
    let mut rng = rng_for(seed, 4);
    let mut check = Check::new(4);
    for s in 1..=3usize {
        let Some(f) = check.ok(make_fstar(s).and_then(|d| d.to_function()), || format!("f* s={s}")) else { continue };
        let bound = Ratio::Finite(int(s as i64 + 1));
        let floor = Ratio::Finite(int(s as i64 - 1));
        let mut best = Ratio::Finite(int(0));
        for _ in 0..20 {
            let c = CostVector::random(2 * s + 1, &mut rng, 0);
            let r = bf2_algorithm(&f, s, &c)
                .and_then(|_| competitive_ratio_exhaustive(|| bf2_algorithm(&f, s, &c).expect("checked"), &f, &c, false));
            let Some(r) = check.ok(r, || format!("f* s={s} c={c}")) else { continue };
            check.expect(r.ratio <= bound, || format!("f* s={s} c={c}: ratio {} > {bound}", r.ratio));
            best = best.max(r.ratio);
        }
        if best > floor {
            check.note(format!("s={s}: largest ratio {best} exceeds s-1"));
        } else {
            check.note(format!("s={s}: no tested cost vector exceeded s-1 (largest {best})"));
        }
    }
    check.finish()
}

fn quadratic_lower_bound_suite(seed: u64) -> CriterionResult {
    let mut rng = rng_for(seed, 5);
    let mut check = Check::new(5);
    let mut instances: Vec<(String, Dnf, Option<usize>)> = Vec::new();
    for s in 1..=4 {
        instances.push((format!("fstar:{s}"), make_fstar(s).expect("small s"), Some(s)));
    }
    for i in 0..200 {
        let n = rng.gen_range(2..=8);
        instances.push((format!("random #{i}"), generators::random_quadratic(n, &mut rng), None));
    }
    let mut tight = 0;
    for (name, dnf, fstar) in &instances {
        let Some(f) = check.ok(dnf.to_function(), || name.clone()) else { continue };
        let Some(analysis) = check.ok(maxterm_survival_analysis(&f), || format!("{name}: {dnf}")) else { continue };
        check.expect(analysis.survivor_bound_holds(), || {
            format!("{name}: |L*| = {} but |C - L| = {}", analysis.l_star.len(), analysis.c.len() - analysis.l.len())
        });
        if 2 * analysis.l_star.len() == analysis.c.len() - analysis.l.len() {
            tight += 1;
        }
        let third = Ratio::Finite(frac(analysis.c.len() as i64, 3));
        let cache = LpCache::new();
        let mut best = [Ratio::Finite(int(0)), Ratio::Finite(int(0)), Ratio::Finite(int(0))];
        for which in [CostMap::C1, CostMap::C2] {
            let Ok((c, adv)) = survival_adversary(&analysis, which) else { continue };
            let algorithms: Vec<(usize, Box<dyn crate::harness::EvaluationAlgorithm>)> = {
                let mut v: Vec<(usize, Box<dyn crate::harness::EvaluationAlgorithm>)> =
                    vec![(0, Box::new(Greedy::new(&c)))];
                if let Some(lpa) = check.ok(lpa_evaluator(&f, &c, &cache), || name.clone()) {
                    v.push((1, Box::new(lpa)));
                }
                if let Some(s) = fstar {
                    if let Some(bf2) = check.ok(bf2_algorithm(&f, *s, &c), || name.clone()) {
                        v.push((2, Box::new(bf2)));
                    }
                }
                v
            };
            for (slot, mut alg) in algorithms {
                let mut adv = adv.clone();
                let run = adversarial_ratio(&mut alg, &f, &mut adv, &c);
                let Some((report, _)) = check.ok(run, || format!("{name} {which}")) else { continue };
                check.expect(f.eval(report.worst_assignment), || {
                    format!("{name} {which}: adversary assignment {} has f = 0", report.worst_assignment)
                });
                best[slot] = best[slot].clone().max(report.ratio);
            }
        }
        let applicable = if fstar.is_some() { 3 } else { 2 };
        for (slot, label) in ["greedy", "LPA", "BF2"].iter().enumerate().take(applicable) {
            check.expect(best[slot] >= third, || format!("{name} {label}: best forced ratio {} < l/3 = {third}", best[slot]));
        }
    }
    check.note(format!("{} instances; survivor bound tight on {tight}", instances.len()));
    check.finish()
}

fn count_determination_suite() -> CriterionResult {
    let mut check = Check::new(6);
    for n in 1..=7 {
        for p in SymmetricProfile::all(n) {
            let f = p.to_function().expect("small n");
            for n0 in 0..=n {
                for n1 in 0..=n - n0 {
                    let pairs: Vec<(usize, bool)> = (0..n0).map(|v| (v, false)).chain((n0..n0 + n1).map(|v| (v, true))).collect();
                    let partial = PartialAssignment::from_pairs(n, &pairs).expect("in range");
                    let brute = f.is_determined_brute(&partial);
                    let counted = determined_symmetric(&p, n0, n1).expect("n0 + n1 ≤ n");
                    check.expect(brute == counted, || format!("{p} n0={n0} n1={n1}: counted {counted:?}, brute {brute:?}"));
                }
            }
        }
    }
    check.finish()
}

fn lp_suite(seed: u64) -> CriterionResult {
    let mut rng = rng_for(seed, 7);
    let mut check = Check::new(7);

    // (a) LP optimum at most PROOF, with a verified optimality certificate
    for i in 0..200 {
        let n = rng.gen_range(2..=7);
        let f = generators::random_function(n, &mut rng);
        let Some(lp) = check.ok(build_lp(&f), || format!("random #{i}")) else { continue };
        let sol = solve_lp(&lp);
        let proof = proof_size_max(&f).expect("checked by build_lp");
        check.expect(sol.certify(&lp), || format!("random #{i} ({f:?}): certificate fails"));
        check.expect(sol.objective <= int(proof as i64), || format!("random #{i} ({f:?}): LP {} > PROOF {proof}", sol.objective));
    }

    // (b) delta = PROOF on monotone functions
    let mut monotone: Vec<BooleanFunction> =
        (1..=4).flat_map(generators::all_monotone).filter(|f| !f.is_constant()).collect();
    let exhaustive = monotone.len();
    for _ in 0..50 {
        monotone.push(generators::random_monotone(5, &mut rng));
    }
    for f in &monotone {
        let Some(d) = check.ok(delta(f), || format!("{f:?}")) else { continue };
        let proof = proof_size_max(f).expect("small n");
        check.expect(d.value == int(proof as i64), || format!("monotone {f:?}: delta {} != PROOF {proof}", d.value));
    }
    check.note(format!("{exhaustive} monotone functions on 1..=4 variables and 50 sampled on 5"));

    // (c) the switching function
    let g = generators::switching_function();
    if let Some(d) = check.ok(delta(&g), || "g".into()) {
        check.expect(d.value == int(3), || format!("delta(g) = {}", d.value));
    }
    let proof = proof_size_max(&g).expect("small n");
    check.expect(proof == 4, || format!("PROOF(g) = {proof}"));

    // (d) the (k, t) family
    for (k, t) in [(1, 1), (1, 2), (2, 1), (1, 3)] {
        let Some(fam) = check.ok(FamilySpec::new(k, t).and_then(make_family), || format!("family {k},{t}")) else { continue };
        if let Some(d) = check.ok(delta(&fam.function), || format!("family {k},{t}")) {
            check.expect(d.value == int((k + t) as i64), || format!("family {k},{t}: delta {}", d.value));
        }
        let proof = proof_size_max(&fam.function).expect("small n");
        check.expect(proof == t << k, || format!("family {k},{t}: PROOF {proof}"));
    }
    check.finish()
}

fn lpa_suite(seed: u64) -> CriterionResult {
    let mut rng = rng_for(seed, 8);
    let mut check = Check::new(8);
    for i in 0..50 {
        let n = rng.gen_range(2..=6);
        let f = generators::random_function(n, &mut rng);
        let Some(d) = check.ok(delta(&f), || format!("random #{i}")) else { continue };
        let bound = Ratio::Finite(d.value.clone());
        let cache = LpCache::new();
        for _ in 0..5 {
            let c = CostVector::random(n, &mut rng, 0);
            let r = lpa_evaluator(&f, &c, &cache)
                .and_then(|_| competitive_ratio_exhaustive(|| lpa_evaluator(&f, &c, &cache).expect("checked"), &f, &c, false));
            let Some(r) = check.ok(r, || format!("random #{i} c={c}")) else { continue };
            check.expect(r.ratio <= bound, || format!("random #{i} ({f:?}) c={c}: LPA {} > delta {}", r.ratio, d.value));
        }
    }
    check.finish()
}

/// The factored instances: the switching function and three family members.
pub fn factored_instances() -> Vec<(String, Dnf)> {
    let mut out = vec![("g".to_string(), generators::switching_dnf())];
    for (k, t) in [(1, 2), (2, 1), (2, 2)] {
        if let Ok(fam) = FamilySpec::new(k, t).and_then(make_family) {
            out.push((format!("family:{k},{t}"), fam.dnf));
        }
    }
    out
}

fn factored_suite() -> CriterionResult {
    let mut check = Check::new(9);
    for (name, dnf) in factored_instances() {
        if Caps::current().exhaustive_n < dnf.n() {
            check.note(format!("{name} skipped: n = {} exceeds the exhaustive cap", dnf.n()));
            continue;
        }
        let Some(ff) = check.ok(FactoredFunction::new(&dnf, None), || name.clone()) else { continue };
        let target = int((ff.k() + ff.gamma()) as i64);
        let f = &ff.function;

        if let Some(sol) = check.ok(factored_feasible_solution(&ff), || name.clone()) {
            let lp = build_lp(f).expect("within caps");
            check.expect(lp.is_feasible(&sol.s), || format!("{name}: averaged solution infeasible"));
            check.expect(sol.objective <= target, || format!("{name}: objective {} > k + Gamma = {target}", sol.objective));
        }
        match check.ok(z_free_proofs_decompose(&ff), || name.clone()) {
            Some(Err(vars)) => check.expect(false, || format!("{name}: Z-free proof {vars:#b} does not decompose")),
            Some(Ok(_)) => check.expect(true, String::new),
            None => {}
        }

        let Some(cert) = check.ok(ff.find_certificate(), || name.clone()) else { continue };
        let Some((c, adv)) = check.ok(factored_adversary(&ff, cert), || name.clone()) else { continue };
        let target_ratio = Ratio::Finite(target.clone());
        let cache = LpCache::new();
        let runs: Vec<(&str, Box<dyn crate::harness::EvaluationAlgorithm>)> = vec![
            ("greedy", Box::new(Greedy::new(&c))),
            ("LPA", Box::new(lpa_evaluator(f, &c, &cache).expect("within caps"))),
        ];
        for (label, mut alg) in runs {
            let mut adv = adv.clone();
            let run = adversarial_ratio(&mut alg, f, &mut adv, &c);
            if let Some((report, _)) = check.ok(run, || format!("{name} {label}")) {
                check.expect(report.ratio >= target_ratio, || format!("{name} {label}: forced {} < {target}", report.ratio));
            }
        }
        if let Some(d) = check.ok(delta(f), || name.clone()) {
            check.expect(d.value == target, || format!("{name}: delta {} != k + Gamma = {target}", d.value));
        }
        check.note(format!("{name}: k = {}, Gamma = {}, delta = k + Gamma = {target}", ff.k(), ff.gamma()));
    }
    check.finish()
}

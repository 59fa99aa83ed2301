use boolprice::generators::Generator;
use boolprice::harness::{adversarial_ratio, competitive_ratio_exhaustive, Adversary, Greedy, Observation};
use boolprice::lp::{
    build_lp, delta, factored_adversary, factored_feasible_solution, lpa_evaluator_with, make_family, solve_lp,
    z_free_proofs_decompose, FactoredFunction, FamilySpec, LpCache, LpaRule,
};
use boolprice::proofs::{certificates, enumerate_proofs, proof_size_max};
use boolprice::quadratic::{bf2_algorithm, is_quadratic, make_fstar, maxterm_survival_analysis, survival_adversary, CostMap};
use boolprice::rational::int;
use boolprice::symmetric::{blocks, extremal_cost_vector, gamma_c_formula, spread, symmetric_adversary};
use boolprice::verify::{run_suite, Suite};
use boolprice::{BooleanFunction, CostVector, Error, EvaluationAlgorithm, Ratio, Result, SymmetricProfile};
use serde_json::json;

use crate::input::{load_cost, load_function, parse_vars, Source};
use crate::report::{Output, Report};
use crate::Failure;

/// Reads variables in a fixed order given on the command line.
struct StaticOrder(Vec<usize>);

impl EvaluationAlgorithm for StaticOrder {
    fn next_query(&mut self, history: &[Observation]) -> Option<usize> {
        self.0.iter().copied().find(|v| history.iter().all(|&(u, _)| u != *v))
    }
}

fn parse_order(text: &str, n: usize) -> Result<Vec<usize>> {
    let order = parse_vars(text)?;
    let mut seen = vec![false; n];
    for &v in &order {
        if v >= n {
            return Err(Error::VariableOutOfRange { var: v, n });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Invalid(format!("x{v} appears twice in the order")));
        }
    }
    if order.len() != n {
        return Err(Error::Invalid(format!("the order must list all {n} variables")));
    }
    Ok(order)
}

/// s for f*, inferred from n; bf2_algorithm rejects anything else.
fn fstar_s(source: &Source) -> usize {
    match source.generator {
        Some(Generator::Fstar(s)) => s,
        _ => source.n().saturating_sub(1) / 2,
    }
}

fn make_algorithm(name: &str, source: &Source, c: &CostVector, cache: &LpCache) -> Result<Box<dyn EvaluationAlgorithm>> {
    let f = &source.function;
    Ok(match name {
        "greedy" => Box::new(Greedy::new(c)),
        "bf2" => Box::new(bf2_algorithm(f, fstar_s(source), c)?),
        "lpa" => Box::new(lpa_evaluator_with(f, c, cache, LpaRule::Residual)?),
        "lpa-fresh" => Box::new(lpa_evaluator_with(f, c, cache, LpaRule::Fresh)?),
        _ => match name.strip_prefix("order:") {
            Some(list) => Box::new(StaticOrder(parse_order(list, f.n())?)),
            None => return Err(Error::Invalid(format!("unknown algorithm {name:?}"))),
        },
    })
}

fn with_function(command: &str, f: &str, seed: u64) -> Result<(Report, Source)> {
    let source = load_function(f)?;
    let mut report = Report::new(command, seed);
    report.input("f", &source.label);
    report.input("n", source.n());
    Ok((report, source))
}

pub fn analyze(f: &str, seed: u64) -> Result<Report> {
    let (mut report, source) = with_function("analyze", f, seed)?;
    let g = &source.function;
    let proofs = enumerate_proofs(g)?;
    let certs = certificates(g)?;
    report.result("essential_variables", g.essential_mask().count_ones());
    report.result("PROOF", proofs.max_size());
    report.result("k", certs.k());
    report.result("l", certs.l());
    report.result("minterms", certs.minterms.len());
    report.result("maxterms", certs.maxterms.len());
    report.result("proofs", proofs.proofs.len());
    report.result("proof_sets", proofs.var_sets.len());
    report.result("monotone", g.is_monotone());
    report.result("quadratic", is_quadratic(g)?);
    if let Some(p) = source.profile() {
        report.result("profile", p.to_string());
        if !p.is_constant() {
            report.result("blocks", blocks(&p));
            report.result("spread", spread(&p));
        }
    }
    Ok(report)
}

pub fn ratio(f: &str, alg: &str, cost: Option<&str>, adversary: Option<&str>, table: bool, seed: u64) -> Result<Report> {
    let (mut report, source) = with_function("ratio", f, seed)?;
    let g = &source.function;
    report.input("alg", alg);
    let cache = LpCache::new();
    let Some(adversary) = adversary else {
        let cost_name = cost.unwrap_or("unit");
        let c = load_cost(cost_name, &source, seed)?;
        report.input("cost", cost_name);
        report.result("costs", &c);
        make_algorithm(alg, &source, &c, &cache)?;
        let r = competitive_ratio_exhaustive(|| make_algorithm(alg, &source, &c, &cache).expect("checked"), g, &c, table)?;
        let measured = r.ratio.clone();
        report.result("ratio", &r);
        if let Some(p) = source.profile().filter(|p| !p.is_constant()) {
            let formula = gamma_c_formula(&p, &c)?;
            report.result("formula", &formula);
            if alg == "greedy" {
                report.verdict(format!("greedy ratio {measured} = closed form {formula}"), measured == formula);
            } else {
                report.verdict(format!("ratio {measured} >= optimal {formula}"), measured >= formula);
            }
        }
        match alg {
            "bf2" => {
                let bound = Ratio::Finite(int(fstar_s(&source) as i64 + 1));
                report.verdict(format!("ratio {measured} <= s+1 = {bound}"), measured <= bound);
            }
            "lpa" => {
                let d = delta(g)?;
                report.result("delta", d.value.to_string());
                let bound = Ratio::Finite(d.value);
                report.verdict(format!("ratio {measured} <= delta {bound}"), measured <= bound);
            }
            _ => {}
        }
        return Ok(report);
    };

    report.input("adversary", adversary);
    let (c, mut adv, floor): (CostVector, Box<dyn Adversary>, Option<(Ratio, String)>) = match adversary {
        "symmetric" => {
            let p = source
                .profile()
                .ok_or_else(|| Error::Invalid("the symmetric adversary needs a symmetric function".into()))?;
            let cost_name = cost.unwrap_or("unit");
            report.input("cost", cost_name);
            let c = load_cost(cost_name, &source, seed)?;
            let formula = gamma_c_formula(&p, &c)?;
            let adv = symmetric_adversary(&p, &c)?;
            (c, Box::new(adv), Some((formula, "closed form".to_string())))
        }
        "survival:c1" | "survival:c2" | "factored" => {
            if cost.is_some() {
                return Err(Error::Invalid(format!("the {adversary} adversary constructs its own costs; drop --cost")));
            }
            if adversary == "factored" {
                let ff = FactoredFunction::new(source.require_dnf()?, None)?;
                let cert = ff.find_certificate()?;
                let target = Ratio::Finite(int((ff.k() + ff.gamma()) as i64));
                report.result("certificate", cert);
                let (c, adv) = factored_adversary(&ff, cert)?;
                (c, Box::new(adv), Some((target, "k + Gamma".to_string())))
            } else {
                let which: CostMap = adversary["survival:".len()..].parse()?;
                let analysis = maxterm_survival_analysis(g)?;
                let (c, adv) = survival_adversary(&analysis, which)?;
                (c, Box::new(adv), None)
            }
        }
        _ => return Err(Error::Invalid(format!("unknown adversary {adversary:?}"))),
    };
    report.result("costs", &c);
    let mut algorithm = make_algorithm(alg, &source, &c, &cache)?;
    let (r, transcript) = adversarial_ratio(&mut algorithm, g, &mut adv, &c)?;
    report.result("reads", transcript.read_vars());
    report.result("ratio", &r);
    if adversary.starts_with("survival") {
        report.verdict("adversary assignment has f = 1", g.eval(r.worst_assignment));
    }
    if let Some((floor, what)) = floor {
        report.verdict(format!("forced ratio {} >= {what} {floor}", r.ratio), r.ratio >= floor);
    }
    Ok(report)
}

pub fn lp_solve(f: &str, seed: u64) -> Result<Report> {
    let (mut report, source) = with_function("lp solve", f, seed)?;
    let lp = build_lp(&source.function)?;
    let sol = solve_lp(&lp);
    report.verdict("primal and dual certificate check", sol.certify(&lp));
    report.result("solution", &sol);
    Ok(report)
}

pub fn lp_delta(f: &str, seed: u64) -> Result<Report> {
    let (mut report, source) = with_function("lp delta", f, seed)?;
    let g = &source.function;
    let d = delta(g)?;
    let proof = proof_size_max(g)?;
    let lp = solve_lp(&build_lp(g)?);
    report.result("delta", d.value.to_string());
    report.result("witness", d.witness.to_string());
    report.result("restrictions_solved", d.distinct);
    report.result("lp_objective", lp.objective.to_string());
    report.result("PROOF", proof);
    report.verdict(format!("LP {} <= delta {}", lp.objective, d.value), lp.objective <= d.value);
    report.verdict(format!("delta {} <= PROOF {proof}", d.value), d.value <= int(proof as i64));
    Ok(report)
}

pub fn lp_lpa(f: &str, cost: Option<&str>, fresh: bool, seed: u64) -> Result<Report> {
    let (mut report, source) = with_function("lp lpa", f, seed)?;
    let g = &source.function;
    let cost_name = cost.unwrap_or("unit");
    let c = load_cost(cost_name, &source, seed)?;
    let rule = if fresh { LpaRule::Fresh } else { LpaRule::Residual };
    report.input("cost", cost_name);
    report.input("rule", if fresh { "fresh" } else { "residual" });
    report.result("costs", &c);
    let cache = LpCache::new();
    lpa_evaluator_with(g, &c, &cache, rule)?;
    let r = competitive_ratio_exhaustive(|| lpa_evaluator_with(g, &c, &cache, rule).expect("checked"), g, &c, false)?;
    let d = delta(g)?;
    report.result("ratio", &r);
    report.result("delta", d.value.to_string());
    report.result("lp_solutions", cache.len());
    if !fresh {
        let bound = Ratio::Finite(d.value.clone());
        report.verdict(format!("LPA ratio {} <= delta {}", r.ratio, d.value), r.ratio <= bound);
    }
    Ok(report)
}

pub fn lp_family(k: usize, t: usize, seed: u64) -> Result<Report> {
    let fam = make_family(FamilySpec::new(k, t)?)?;
    let mut report = Report::new("lp family", seed);
    report.input("k", k);
    report.input("t", t);
    report.result("n", fam.spec.n());
    report.result("dnf", fam.dnf.to_string());
    report.result("labels", &fam.labels);
    let proof = proof_size_max(&fam.function)?;
    report.result("PROOF", proof);
    report.verdict(format!("PROOF {proof} = t * 2^k = {}", t << k), proof == t << k);
    let d = delta(&fam.function)?;
    report.result("delta", d.value.to_string());
    report.verdict(format!("delta {} = k + t = {}", d.value, k + t), d.value == int((k + t) as i64));
    Ok(report)
}

pub fn lp_factored(f: &str, z: Option<&str>, seed: u64) -> Result<Report> {
    let (mut report, source) = with_function("lp lemma2", f, seed)?;
    let z = z.map(parse_vars).transpose()?;
    let ff = FactoredFunction::new(source.require_dnf()?, z.as_deref())?;
    let g = &ff.function;
    let target = int((ff.k() + ff.gamma()) as i64);
    report.result("summary", ff.summary());
    report.result("k_plus_gamma", target.to_string());

    let sol = factored_feasible_solution(&ff)?;
    let lp = build_lp(g)?;
    report.verdict("averaged solution is feasible", lp.is_feasible(&sol.s));
    report.verdict(format!("objective {} <= k + Gamma", sol.objective), sol.objective <= target);
    report.result("feasible_solution", &sol);

    match z_free_proofs_decompose(&ff)? {
        Ok(count) => {
            report.result("z_free_proofs", count);
            report.verdict("Z-free proofs decompose into per-a certificates", true);
        }
        Err(vars) => {
            let names: Vec<String> = (0..ff.n()).filter(|v| vars >> v & 1 == 1).map(|v| format!("x{v}")).collect();
            report.result("undecomposed_proof", names);
            report.verdict("Z-free proofs decompose into per-a certificates", false);
        }
    }

    let cert = ff.find_certificate()?;
    report.result("certificate", cert);
    let (c, adv) = factored_adversary(&ff, cert)?;
    report.result("costs", &c);
    let cache = LpCache::new();
    let floor = Ratio::Finite(target.clone());
    let mut forced = serde_json::Map::new();
    for name in ["greedy", "lpa"] {
        let mut alg = make_algorithm(name, &source, &c, &cache)?;
        let mut adv = adv.clone();
        let (r, _) = adversarial_ratio(&mut alg, g, &mut adv, &c)?;
        report.verdict(format!("{name} forced to {} >= k + Gamma", r.ratio), r.ratio >= floor);
        forced.insert(name.to_string(), json!(r));
    }
    report.result("forced", forced);
    let d = delta(g)?;
    report.result("delta", d.value.to_string());
    report.verdict(format!("delta {} = k + Gamma {target}", d.value), d.value == target);
    Ok(report)
}

pub fn quad_analyze(f: &str, seed: u64) -> Result<Report> {
    let (mut report, source) = with_function("quad analyze", f, seed)?;
    let analysis = maxterm_survival_analysis(&source.function)?;
    report.verdict(
        format!("|L*| = {} >= |C - L| / 2 = {}/2", analysis.l_star.len(), analysis.c.len() - analysis.l.len()),
        analysis.survivor_bound_holds(),
    );
    report.result("guaranteed_ratio", analysis.guaranteed_ratio().to_string());
    report.result("analysis", &analysis);
    Ok(report)
}

pub fn quad_fstar(s: usize, out: &Output) -> Result<(), Failure> {
    let dnf = make_fstar(s)?;
    let value = json!({ "s": s, "n": dnf.n(), "dnf": dnf.to_string() });
    out.emit(&value, &format!("{dnf}\n"))?;
    Ok(())
}

pub fn sym(profile: &str, cost: Option<&str>, seed: u64) -> Result<Report> {
    let p: SymmetricProfile = profile.parse()?;
    let source = load_function(&format!("sym:{p}"))?;
    let mut report = Report::new("sym", seed);
    report.input("profile", p.to_string());
    report.input("n", p.n());
    report.result("blocks", blocks(&p));
    if p.is_constant() {
        return Ok(report);
    }
    let s = spread(&p);
    report.result("spread", s);
    let extremal = extremal_cost_vector(&p)?;
    let at_extremal = gamma_c_formula(&p, &extremal)?;
    report.result("extremal_costs", &extremal);
    report.verdict(format!("closed form at extremal costs {at_extremal} = spread {s}"), at_extremal == Ratio::Finite(int(s as i64)));
    if let Some(cost_name) = cost {
        let c = load_cost(cost_name, &source, seed)?;
        let formula = gamma_c_formula(&p, &c)?;
        report.input("cost", cost_name);
        report.result("costs", &c);
        report.result("formula", &formula);
        report.verdict(format!("closed form {formula} <= spread {s}"), formula <= Ratio::Finite(int(s as i64)));
    }
    Ok(report)
}

pub fn verify(suite: &str, seed: u64, out: &Output) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, seed);
    let mut text = String::new();
    for c in &report.criteria {
        text.push_str(&format!("criterion {:>2} {}: {} ({} checks)\n", c.id, if c.passed { "PASS" } else { "FAIL" }, c.name, c.checks));
        for note in &c.notes {
            text.push_str(&format!("    note: {note}\n"));
        }
        for failure in &c.failures {
            text.push_str(&format!("    failure: {failure}\n"));
        }
    }
    out.emit(&report, &text)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

pub fn gen(generator: &str, format: &str, out: &Output) -> Result<(), Failure> {
    let generator: Generator = generator.parse()?;
    let instance = generator.build()?;
    let text = match format {
        "dnf" => match &instance.dnf {
            Some(dnf) => format!("{dnf}\n"),
            None => dnf_of_table(&instance.function),
        },
        "table" => instance.function.to_table_file(),
        other => return Err(Failure::Input(format!("unknown format {other:?}; expected dnf or table"))),
    };
    let value = json!({ "generator": generator.to_string(), "n": instance.function.n(), "labels": instance.labels, "text": text });
    out.emit(&value, &text)?;
    Ok(())
}

/// The canonical DNF (one term per true point), with a `vars` header so
/// the variable count survives a round trip.
fn dnf_of_table(f: &BooleanFunction) -> String {
    let n = f.n();
    let terms: Vec<String> = boolprice::Assignment::all(n)
        .filter(|&a| f.eval(a))
        .map(|a| (0..n).map(|v| format!("{}x{v}", if a.get(v) { "" } else { "!" })).collect::<Vec<_>>().join(" & "))
        .collect();
    let body = if terms.is_empty() { "0".to_string() } else if n == 0 { "1".to_string() } else { terms.join(" | ") };
    format!("vars {n}\n{body}\n")
}

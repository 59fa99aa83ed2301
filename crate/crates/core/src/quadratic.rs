//! Quadratic functions (every minterm has at most two literals): the
//! lower-bound construction built on a largest maxterm, the f* family and
//! its evaluator BF2.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cost::CostVector;
use crate::dnf::{format_literals, literal_vars, Dnf, Literal, LiteralSet};
use crate::error::{Error, Result};
use crate::function::{bits_of, full_mask, Assignment, BooleanFunction, PartialAssignment};
use crate::harness::{Adversary, EvaluationAlgorithm, Observation};
use crate::proofs::certificates;
use crate::rational::int;

/// `⋁_{i≤s} (x_i ∧ x0) ∨ ⋁_{s<i≤2s} (x_i ∧ ¬x0)` on `x0, x1, …, x2s`.
pub fn make_fstar(s: usize) -> Result<Dnf> {
    if s < 1 {
        return Err(Error::Invalid("f* needs s ≥ 1".into()));
    }
    let n = 2 * s + 1;
    crate::caps::check_table(n)?;
    let terms = (1..=2 * s)
        .map(|i| vec![if i <= s { Literal::pos(0) } else { Literal::neg(0) }, Literal::pos(i)])
        .collect();
    Dnf::new(n, terms)
}

/// The two halves `V1 = {x1..xs}` and `V2 = {xs+1..x2s}` as masks.
pub fn fstar_halves(s: usize) -> (u32, u32) {
    let v1 = full_mask(s) << 1;
    (v1, v1 << s)
}

pub fn is_quadratic(f: &BooleanFunction) -> Result<bool> {
    if f.is_constant() {
        return Ok(true);
    }
    Ok(certificates(f)?.k() <= 2)
}

/// Syntactic check on a DNF: every term has at most two literals. Such a
/// DNF always induces a quadratic function.
pub fn dnf_is_quadratic(dnf: &Dnf) -> bool {
    dnf.terms().iter().all(|t| t.len() <= 2)
}

/// `(k(f), l(f))`: the largest minterm and maxterm sizes.
pub fn k_l(f: &BooleanFunction) -> Result<(usize, usize)> {
    let certs = certificates(f)?;
    Ok((certs.k(), certs.l()))
}

/// Which of the two lower-bound cost maps to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostMap {
    /// Unit cost on `var(L ∪ L*)`.
    C1,
    /// Unit cost on `var(L*)`.
    C2,
}

impl std::str::FromStr for CostMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c1" => Ok(CostMap::C1),
            "c2" => Ok(CostMap::C2),
            _ => Err(Error::Invalid(format!("unknown cost map {s:?}, expected c1 or c2"))),
        }
    }
}

impl std::fmt::Display for CostMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CostMap::C1 => "c1",
            CostMap::C2 => "c2",
        })
    }
}

/// The maxterm-survival construction for a quadratic function.
///
/// `c` is a largest maxterm (lexicographically least among ties). `l` holds
/// the literals of `c` that form a minterm alone or together with the
/// negation of another literal of `c`. `sigma_star` fixes every variable
/// outside `c` by majority vote over the minterms `{x, ℓ}` and `{¬x, ℓ}`
/// with `ℓ ∈ c \ l` (ties give 0), and `l_star` lists the literals of
/// `c \ l` that survive it: setting them true forces `f = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticAnalysis {
    pub n: usize,
    pub k: usize,
    pub c: LiteralSet,
    pub l: LiteralSet,
    pub sigma_star: PartialAssignment,
    pub l_star: LiteralSet,
    pub c1: CostVector,
    pub c2: CostVector,
}

impl QuadraticAnalysis {
    /// `|L*| ≥ |C \ L| / 2`.
    pub fn survivor_bound_holds(&self) -> bool {
        2 * self.l_star.len() >= self.c.len() - self.l.len()
    }

    /// `max(|L*|, (|L| + |L*|) / 2)` as the guaranteed ratio, which is at
    /// least `|C| / 3` whenever the survivor bound holds.
    pub fn guaranteed_ratio(&self) -> crate::rational::Rational {
        let a = int(self.l_star.len() as i64);
        let b = crate::rational::frac((self.l.len() + self.l_star.len()) as i64, 2);
        a.max(b)
    }

    pub fn costs(&self, which: CostMap) -> &CostVector {
        match which {
            CostMap::C1 => &self.c1,
            CostMap::C2 => &self.c2,
        }
    }

    fn targets(&self, which: CostMap) -> LiteralSet {
        match which {
            CostMap::C1 => {
                let mut t: LiteralSet = self.l.iter().chain(&self.l_star).copied().collect();
                t.sort();
                t
            }
            CostMap::C2 => self.l_star.clone(),
        }
    }
}

impl Serialize for QuadraticAnalysis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadraticAnalysis", 9)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("l", &self.c.len())?;
        st.serialize_field("C", &self.c)?;
        st.serialize_field("L", &self.l)?;
        st.serialize_field("sigma_star", &self.sigma_star.to_string())?;
        st.serialize_field("L_star", &self.l_star)?;
        st.serialize_field("survivor_bound", &self.survivor_bound_holds())?;
        st.serialize_field("c1", &self.c1)?;
        st.serialize_field("c2", &self.c2)?;
        st.end()
    }
}

impl std::fmt::Display for QuadraticAnalysis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "C      = {}", format_literals(&self.c))?;
        writeln!(f, "L      = {}", format_literals(&self.l))?;
        writeln!(f, "sigma* = {}", self.sigma_star)?;
        writeln!(f, "L*     = {}", format_literals(&self.l_star))?;
        writeln!(f, "c1     = {}", self.c1)?;
        write!(f, "c2     = {}", self.c2)
    }
}

fn unit_on(n: usize, vars: u32) -> CostVector {
    CostVector::new((0..n).map(|v| int(i64::from(vars >> v & 1 == 1))).collect()).expect("non-negative")
}

/// Builds the survival construction for a non-constant quadratic `f` on
/// its lexicographically least largest maxterm.
pub fn maxterm_survival_analysis(f: &BooleanFunction) -> Result<QuadraticAnalysis> {
    let certs = certificates(f)?;
    let l_size = certs.l();
    let c = certs.maxterms.iter().find(|m| m.len() == l_size).expect("non-constant").clone();
    survival_analysis_on(f, c)
}

/// The same construction on a given maxterm `c`, which need not be largest.
pub fn survival_analysis_on(f: &BooleanFunction, mut c: LiteralSet) -> Result<QuadraticAnalysis> {
    let certs = certificates(f)?;
    if let Some(m) = certs.minterms.iter().find(|m| m.len() > 2) {
        return Err(Error::NotQuadratic(m.len()));
    }
    c.sort();
    if certs.maxterms.binary_search(&c).is_err() {
        return Err(Error::Invalid(format!("{} is not a maxterm", format_literals(&c))));
    }
    let n = f.n();
    let c_vars = literal_vars(&c);
    let in_c = |lit: Literal| c.contains(&lit);

    let l: LiteralSet = c
        .iter()
        .copied()
        .filter(|&lit| {
            certs.has_minterm(&[lit])
                || c.iter().any(|&m| m != lit && {
                    let mut pair = vec![lit, m.negate()];
                    pair.sort();
                    certs.has_minterm(&pair)
                })
        })
        .collect();
    let rest: LiteralSet = c.iter().copied().filter(|lit| !l.contains(lit)).collect();

    let mut sigma = PartialAssignment::empty(n);
    for x in bits_of(full_mask(n) & !c_vars) {
        let partners = |polarity: Literal| {
            rest.iter()
                .filter(|&&lit| {
                    let mut pair = vec![polarity, lit];
                    pair.sort();
                    certs.has_minterm(&pair)
                })
                .count()
        };
        let ones = partners(Literal::pos(x));
        let zeros = partners(Literal::neg(x));
        sigma = sigma.bind(x, ones > zeros)?;
    }

    let l_star: LiteralSet = rest
        .iter()
        .copied()
        .filter(|&lit| {
            let p = sigma.bind(lit.var, lit.var_value_for(true)).expect("variable of C is free");
            f.is_determined(&p) == Some(true)
        })
        .collect();
    debug_assert!(l_star.iter().all(|&lit| in_c(lit)));

    let l_vars = literal_vars(&l);
    let star_vars = literal_vars(&l_star);
    Ok(QuadraticAnalysis {
        n,
        k: certs.k(),
        c1: unit_on(n, l_vars | star_vars),
        c2: unit_on(n, star_vars),
        c,
        l,
        sigma_star: sigma,
        l_star,
    })
}

/// The online adversary of the survival construction. Variables outside
/// the maxterm follow `σ*`; maxterm literals are made false, except the
/// last unread target literal, which is made true.
#[derive(Debug, Clone)]
pub struct SurvivalAdversary {
    sigma_star: PartialAssignment,
    /// Per variable: the maxterm literal on it, if any.
    literal_of: Vec<Option<Literal>>,
    targets: u32,
    winner: Option<usize>,
}

pub fn survival_adversary(analysis: &QuadraticAnalysis, which: CostMap) -> Result<(CostVector, SurvivalAdversary)> {
    let targets = analysis.targets(which);
    if targets.is_empty() {
        return Err(Error::HypothesisNotMet(format!("cost map {which} has no target literals")));
    }
    let mut literal_of = vec![None; analysis.n];
    for &lit in &analysis.c {
        literal_of[lit.var] = Some(lit);
    }
    let adv = SurvivalAdversary {
        sigma_star: analysis.sigma_star,
        literal_of,
        targets: literal_vars(&targets),
        winner: None,
    };
    Ok((analysis.costs(which).clone(), adv))
}

impl SurvivalAdversary {
    fn value(&self, var: usize) -> bool {
        match self.literal_of[var] {
            Some(lit) => lit.var_value_for(self.winner == Some(var)),
            None => self.sigma_star.get(var).expect("σ* covers every variable outside C"),
        }
    }
}

impl Adversary for SurvivalAdversary {
    fn answer(&mut self, var: usize, history: &[Observation]) -> bool {
        if self.targets >> var & 1 == 1 && self.winner.is_none() {
            let read = history.iter().fold(0u32, |m, &(v, _)| m | 1 << v) | 1 << var;
            if self.targets & !read == 0 {
                self.winner = Some(var);
            }
        }
        self.value(var)
    }

    fn finalize(&mut self, history: &[Observation]) -> Assignment {
        if self.winner.is_none() {
            // The run ended before every target was read; the highest unread
            // target takes the true literal.
            let read = history.iter().fold(0u32, |m, &(v, _)| m | 1 << v);
            self.winner = bits_of(self.targets & !read).last();
        }
        let values: Vec<bool> = (0..self.literal_of.len()).map(|v| self.value(v)).collect();
        Assignment::from_bools(&values)
    }
}

/// BF2 for f*: cheapest first until `x0` or a 1-valued variable is read,
/// then drop `V1` (if `x0 = 0` was read or the 1 came from `V1`) or `V2`
/// (otherwise), and continue cheapest first among the rest.
#[derive(Debug, Clone)]
pub struct Bf2 {
    order: Vec<usize>,
    v1: u32,
    v2: u32,
}

pub fn bf2_algorithm(f: &BooleanFunction, s: usize, c: &CostVector) -> Result<Bf2> {
    let expected = make_fstar(s)?.to_function()?;
    if *f != expected {
        return Err(Error::AlgorithmMismatch(format!("the input function (n = {})", f.n())));
    }
    if c.n() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: c.n() });
    }
    let (v1, v2) = fstar_halves(s);
    Ok(Bf2 { order: c.order(), v1, v2 })
}

impl EvaluationAlgorithm for Bf2 {
    fn next_query(&mut self, history: &[Observation]) -> Option<usize> {
        let read = history.iter().fold(0u32, |m, &(v, _)| m | 1 << v);
        let trigger = history.iter().find(|&&(v, b)| v == 0 || b);
        let removed = match trigger {
            None => 0,
            Some(&(0, false)) => self.v1,
            Some(&(v, _)) if self.v1 >> v & 1 == 1 => self.v1,
            Some(_) => self.v2,
        };
        self.order.iter().copied().find(|&v| (read | removed) >> v & 1 == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{adversarial_ratio, competitive_ratio_exhaustive, run, Greedy};
    use crate::proofs::{minterms, proof_size_max};
    use crate::rational::Ratio;

    fn lits(text: &str) -> LiteralSet {
        let mut v: LiteralSet = text.split_whitespace().map(|t| t.parse().unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn fstar_structure() {
        let f1 = make_fstar(1).unwrap().to_function().unwrap();
        assert_eq!(minterms(&f1).unwrap(), vec![lits("x0 x1"), lits("!x0 x2"), lits("x1 x2")]);
        for s in 1..=3 {
            let f = make_fstar(s).unwrap().to_function().unwrap();
            assert_eq!(k_l(&f).unwrap(), (2, 2 * s));
            assert!(is_quadratic(&f).unwrap());
            assert_eq!(proof_size_max(&f).unwrap(), 2 * s);
        }
        let f2 = make_fstar(2).unwrap().to_function().unwrap();
        let a = maxterm_survival_analysis(&f2).unwrap();
        assert_eq!(a.c, lits("x1 x2 x3 x4"));
        assert!(make_fstar(0).is_err());
    }

    #[test]
    fn quadratic_recognition() {
        let and3 = BooleanFunction::from_fn(3, |a| a.ones() == 3).unwrap();
        assert!(!is_quadratic(&and3).unwrap());
        assert!(!is_quadratic(&crate::generators::switching_function()).unwrap());
        let maj = crate::generators::majority(3).unwrap();
        assert_eq!(k_l(&maj).unwrap(), (2, 2));
        let or = BooleanFunction::from_fn(2, |a| a.ones() > 0).unwrap();
        assert_eq!(k_l(&or).unwrap(), (1, 2));
    }

    #[test]
    fn survival_analysis_on_small_cases() {
        let f1 = make_fstar(1).unwrap().to_function().unwrap();
        // all three maxterms have size 2; the least one is {x0, x2}
        let a = maxterm_survival_analysis(&f1).unwrap();
        assert_eq!(a.c, lits("x0 x2"));
        assert_eq!(a.l, lits("x2"));
        assert_eq!(a.sigma_star.to_string(), "*1*");
        assert_eq!(a.l_star, lits("x0"));
        let a = survival_analysis_on(&f1, lits("x1 x2")).unwrap();
        assert!(a.l.is_empty());
        assert_eq!(a.sigma_star.to_string(), "0**");
        assert_eq!(a.l_star, lits("x2"));
        assert!(a.survivor_bound_holds());
        assert!(survival_analysis_on(&f1, lits("x1")).is_err());

        let or = BooleanFunction::from_fn(2, |a| a.ones() > 0).unwrap();
        let a = maxterm_survival_analysis(&or).unwrap();
        assert_eq!(a.l, lits("x0 x1"));
        assert!(a.l_star.is_empty());
        assert!(survival_adversary(&a, CostMap::C2).is_err());

        let f2 = make_fstar(2).unwrap().to_function().unwrap();
        assert!(maxterm_survival_analysis(&f2).unwrap().l_star.len() >= 2);
    }

    #[test]
    fn bf2_trace() {
        let f = make_fstar(1).unwrap().to_function().unwrap();
        let c = CostVector::from_ints(&[1, 2, 3]).unwrap();
        let mut alg = bf2_algorithm(&f, 1, &c).unwrap();
        let t = run(&mut alg, &f, Assignment::parse("110").unwrap(), &c).unwrap();
        assert_eq!(t.read_vars(), vec![0, 1]);
        assert_eq!(t.total_cost, int(3));
        assert!(bf2_algorithm(&crate::generators::parity(3).unwrap(), 1, &c).is_err());
    }

    #[test]
    fn bf2_meets_its_bound_on_unit_costs() {
        for s in 1..=3 {
            let f = make_fstar(s).unwrap().to_function().unwrap();
            let c = CostVector::unit(2 * s + 1);
            let r = competitive_ratio_exhaustive(|| bf2_algorithm(&f, s, &c).unwrap(), &f, &c, false).unwrap();
            assert!(r.ratio <= Ratio::Finite(int(s as i64 + 1)));
        }
    }

    #[test]
    fn survival_adversary_forces_a_third_of_l() {
        let f = make_fstar(2).unwrap().to_function().unwrap();
        let a = maxterm_survival_analysis(&f).unwrap();
        let mut best = Ratio::Finite(int(0));
        for which in [CostMap::C1, CostMap::C2] {
            let Ok((c, mut adv)) = survival_adversary(&a, which) else { continue };
            let (report, _) = adversarial_ratio(&mut Greedy::new(&c), &f, &mut adv, &c).unwrap();
            assert!(f.eval(report.worst_assignment));
            best = best.max(report.ratio);
        }
        assert!(best >= Ratio::Finite(crate::rational::frac(4, 3)));
    }
}

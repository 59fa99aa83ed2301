//! Symmetric functions: blocks, spread, the closed-form competitive ratio,
//! and the adversary that attains it.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::cost::CostVector;
use crate::error::{Error, Result};
use crate::function::{Assignment, BooleanFunction};
use crate::harness::{Adversary, Greedy, Observation};
use crate::rational::{int, Ratio, Rational};

/// `fhat[k]` is the value of `f` on any input with exactly `k` ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricProfile {
    fhat: Vec<bool>,
}

/// A maximal run `[lower, upper]` of equal `fhat` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub lower: usize,
    pub upper: usize,
    pub value: bool,
}

impl Block {
    pub fn width(&self) -> usize {
        self.upper - self.lower + 1
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lower <= k && k <= self.upper
    }
}

impl SymmetricProfile {
    /// Panics on an empty profile; a profile on `n` variables has `n + 1`
    /// entries.
    pub fn new(fhat: Vec<bool>) -> Self {
        assert!(fhat.len() >= 2, "a profile needs at least one variable");
        SymmetricProfile { fhat }
    }

    pub fn from_function(f: &BooleanFunction) -> Option<Self> {
        if !f.is_symmetric() {
            return None;
        }
        let n = f.n();
        Some(SymmetricProfile::new((0..=n).map(|k| f.value(((1u64 << k) - 1) as u32)).collect()))
    }

    pub fn n(&self) -> usize {
        self.fhat.len() - 1
    }

    pub fn value(&self, ones: usize) -> bool {
        self.fhat[ones]
    }

    pub fn fhat(&self) -> &[bool] {
        &self.fhat
    }

    pub fn is_constant(&self) -> bool {
        self.fhat.iter().all(|&b| b == self.fhat[0])
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(self.n(), |a| self.fhat[a.ones()])
    }

    /// The profile of `x ↦ f(¬x)`.
    pub fn mirrored(&self) -> Self {
        SymmetricProfile { fhat: self.fhat.iter().rev().copied().collect() }
    }

    /// Every profile on `n` variables, constants included, in binary order
    /// of `fhat` read as a number with `fhat[0]` lowest.
    pub fn all(n: usize) -> impl Iterator<Item = SymmetricProfile> {
        (0u64..1 << (n + 1)).map(move |code| SymmetricProfile::new((0..=n).map(|k| code >> k & 1 == 1).collect()))
    }
}

impl fmt::Display for SymmetricProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.fhat {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for SymmetricProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() < 2 {
            return Err(Error::Invalid(format!("profile {s:?} needs n+1 ≥ 2 digits")));
        }
        let fhat = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Invalid(format!("profile {s:?} must be a 0/1 string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SymmetricProfile::new(fhat))
    }
}

impl Serialize for SymmetricProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn blocks(p: &SymmetricProfile) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    for (k, &b) in p.fhat.iter().enumerate() {
        match out.last_mut() {
            Some(last) if last.value == b => last.upper = k,
            _ => out.push(Block { lower: k, upper: k, value: b }),
        }
    }
    out
}

/// s(f): the widest block.
pub fn spread(p: &SymmetricProfile) -> usize {
    blocks(p).iter().map(Block::width).max().expect("at least one block")
}

fn block_of(p: &SymmetricProfile, ones: usize) -> Block {
    *blocks(p).iter().find(|b| b.contains(ones)).expect("blocks partition 0..=n")
}

/// Determination from counts alone: `n0` zeros and `n1` ones read force `f`
/// exactly when the block holding `n1` reaches `n - n0`.
pub fn determined_symmetric(p: &SymmetricProfile, n0: usize, n1: usize) -> Result<Option<bool>> {
    let n = p.n();
    if n0 + n1 > n {
        return Err(Error::Invalid(format!("n0 + n1 = {} exceeds n = {n}", n0 + n1)));
    }
    let b = block_of(p, n1);
    Ok((b.upper >= n - n0).then_some(b.value))
}

/// Reads variables cheapest first; the harness stops it once determined.
pub fn greedy_evaluator(c: &CostVector) -> Greedy {
    Greedy::new(c)
}

/// Costs sorted nondecreasing and their prefix sums `d[0..=n]`.
fn sorted_prefix(c: &CostVector) -> (Vec<Rational>, Vec<Rational>) {
    let sorted: Vec<Rational> = c.order().into_iter().map(|v| c.get(v).clone()).collect();
    let mut d = vec![Rational::zero()];
    for x in &sorted {
        let next = d.last().expect("nonempty") + x;
        d.push(next);
    }
    (sorted, d)
}

/// The terms `d_k / (d_{n-s} + c_k)` for `k = n-s+1 ..= n`, paired with `k`.
fn formula_terms(p: &SymmetricProfile, c: &CostVector) -> Result<Vec<(usize, Ratio)>> {
    if p.is_constant() {
        return Err(Error::Constant("the closed-form ratio needs a non-constant profile"));
    }
    let n = p.n();
    if c.n() != n {
        return Err(Error::LengthMismatch { expected: n, got: c.n() });
    }
    let s = spread(p);
    let (sorted, d) = sorted_prefix(c);
    Ok((n - s + 1..=n).map(|k| (k, Ratio::of(&d[k], &(&d[n - s] + &sorted[k - 1])))).collect())
}

/// γ_c(f) for symmetric `f`: `max_{k > n-s} d_k / (d_{n-s} + c_k)` over the
/// sorted costs. A zero denominator gives `inf`, and `0/0` counts as 1.
pub fn gamma_c_formula(p: &SymmetricProfile, c: &CostVector) -> Result<Ratio> {
    Ok(formula_terms(p, c)?.into_iter().map(|(_, r)| r).max().expect("s ≥ 1 gives a term"))
}

/// Cost of the cheapest proof: the `n - u` cheapest zeros plus the `l`
/// cheapest ones, where `[l, u]` is the block of `σ`'s weight.
pub fn cheapest_proof_symmetric(p: &SymmetricProfile, sigma: Assignment, c: &CostVector) -> Result<Rational> {
    let n = p.n();
    if sigma.n() != n || c.n() != n {
        return Err(Error::LengthMismatch { expected: n, got: if sigma.n() != n { sigma.n() } else { c.n() } });
    }
    let b = block_of(p, sigma.ones());
    let order = c.order();
    let zeros = order.iter().filter(|&&v| !sigma.get(v)).take(n - b.upper);
    let ones = order.iter().filter(|&&v| sigma.get(v)).take(b.lower);
    Ok(zeros.chain(ones).fold(Rational::zero(), |acc, &v| acc + c.get(v)))
}

/// `n - s` zeros followed by `s` ones.
pub fn extremal_cost_vector(p: &SymmetricProfile) -> Result<CostVector> {
    if p.is_constant() {
        return Err(Error::Constant("the extremal cost vector needs a non-constant profile"));
    }
    let n = p.n();
    let s = spread(p);
    CostVector::new((0..n).map(|i| int(i64::from(i >= n - s))).collect())
}

/// The lower-bound adversary for symmetric functions.
///
/// Let `[l, u]` be the widest block with smallest `u` and `k` the smallest
/// maximizer of the closed form. With variables in cost order, the `n-u-1`
/// cheapest are answered 0; the others are answered 1 until `k - n + u`
/// ones have been given. At that point the assignment is extended: unset
/// cheap variables to 0, the cheapest other unset variable to 0, everything
/// else to 1, and later queries read from the extension. The final
/// assignment has exactly `u` ones.
///
/// When `u = n` the construction runs on the mirrored profile and every
/// answer is complemented.
#[derive(Debug, Clone)]
pub struct SymmetricAdversary {
    flip: bool,
    order: Vec<usize>,
    cheap: Vec<bool>,
    ones_budget: usize,
    ones_given: usize,
    extension: Option<Vec<bool>>,
}

pub fn symmetric_adversary(p: &SymmetricProfile, c: &CostVector) -> Result<SymmetricAdversary> {
    let terms = formula_terms(p, c)?;
    let n = p.n();
    let s = spread(p);
    let widest = blocks(p).into_iter().filter(|b| b.width() == s).min_by_key(|b| b.upper).expect("a widest block");
    let (flip, u) = if widest.upper == n {
        let mirrored = blocks(&p.mirrored()).into_iter().find(|b| b.width() == s && b.lower == 0).expect("mirror block");
        (true, mirrored.upper)
    } else {
        (false, widest.upper)
    };
    let best = terms.iter().map(|(_, r)| r).max().expect("terms");
    let k = terms.iter().find(|(_, r)| r == best).expect("maximizer").0;
    let order = c.order();
    let mut cheap = vec![false; n];
    for &v in order.iter().take(n - u - 1) {
        cheap[v] = true;
    }
    let mut adv = SymmetricAdversary {
        flip,
        order,
        cheap,
        ones_budget: k + u - n,
        ones_given: 0,
        extension: None,
    };
    if adv.ones_budget == 0 {
        adv.extend(&[]);
    }
    Ok(adv)
}

impl SymmetricAdversary {
    /// `history` is in the adversary's own (unflipped) frame.
    fn extend(&mut self, history: &[Observation]) {
        let n = self.order.len();
        let mut known: Vec<Option<bool>> = vec![None; n];
        for &(v, b) in history {
            known[v] = Some(b);
        }
        let mut zero_placed = false;
        let mut ext = vec![false; n];
        for &v in &self.order {
            ext[v] = match known[v] {
                Some(b) => b,
                None if self.cheap[v] => false,
                None if !zero_placed => {
                    zero_placed = true;
                    false
                }
                None => true,
            };
        }
        self.extension = Some(ext);
    }

    fn local_history(&self, history: &[Observation]) -> Vec<Observation> {
        history.iter().map(|&(v, b)| (v, b != self.flip)).collect()
    }
}

impl Adversary for SymmetricAdversary {
    fn answer(&mut self, var: usize, history: &[Observation]) -> bool {
        let local = if let Some(ext) = &self.extension {
            ext[var]
        } else if self.cheap[var] {
            false
        } else {
            self.ones_given += 1;
            if self.ones_given == self.ones_budget {
                let mut h = self.local_history(history);
                h.push((var, true));
                self.extend(&h);
            }
            true
        };
        local != self.flip
    }

    fn finalize(&mut self, history: &[Observation]) -> Assignment {
        if self.extension.is_none() {
            let h = self.local_history(history);
            self.extend(&h);
        }
        let ext = self.extension.as_ref().expect("extended");
        let values: Vec<bool> = ext.iter().map(|&b| b != self.flip).collect();
        Assignment::from_bools(&values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{adversarial_ratio, competitive_ratio_exhaustive, EvaluationAlgorithm};
    use crate::proofs::cheapest_proof;
    use crate::rational::frac;

    fn profile(s: &str) -> SymmetricProfile {
        s.parse().unwrap()
    }

    #[test]
    fn blocks_and_spread() {
        let parity = profile("01010");
        assert_eq!(blocks(&parity).len(), 5);
        assert_eq!(spread(&parity), 1);
        let maj = profile("0011");
        let b = blocks(&maj);
        assert_eq!((b[0].lower, b[0].upper, b[1].lower, b[1].upper), (0, 1, 2, 3));
        assert_eq!(spread(&maj), 2);
        assert_eq!(spread(&profile("000000")), 6);
    }

    #[test]
    fn determination_from_counts() {
        let maj = profile("0011");
        assert_eq!(determined_symmetric(&maj, 0, 2).unwrap(), Some(true));
        assert_eq!(determined_symmetric(&maj, 1, 1).unwrap(), None);
        assert!(determined_symmetric(&maj, 2, 2).is_err());
        let parity = profile("010101");
        for n0 in 0..5 {
            for n1 in 0..5 - n0 {
                assert_eq!(determined_symmetric(&parity, n0, n1).unwrap(), None);
            }
        }
    }

    #[test]
    fn formula_examples() {
        let c = CostVector::from_ints(&[1, 2, 4]).unwrap();
        assert_eq!(gamma_c_formula(&profile("0101"), &c).unwrap(), Ratio::one());
        let unit = CostVector::unit(3);
        assert_eq!(gamma_c_formula(&profile("0011"), &unit).unwrap(), Ratio::Finite(frac(3, 2)));
        let ext = extremal_cost_vector(&profile("0011")).unwrap();
        assert_eq!(ext, CostVector::from_ints(&[0, 1, 1]).unwrap());
        assert_eq!(gamma_c_formula(&profile("0011"), &ext).unwrap(), Ratio::Finite(int(2)));
        assert!(gamma_c_formula(&profile("1111"), &unit).is_err());
    }

    #[test]
    fn zero_denominator_is_infinite() {
        // s = 1, so k = n and the denominator is d_{n-1} + c_n; all zero but
        // the numerator cannot be positive then. Use s = 2 with zeros below.
        let p = profile("0011");
        let c = CostVector::from_ints(&[0, 0, 0]).unwrap();
        assert_eq!(gamma_c_formula(&p, &c).unwrap(), Ratio::one());
    }

    #[test]
    fn cheapest_proof_matches_general_search() {
        let maj = profile("0011");
        let c = CostVector::from_ints(&[5, 1, 7]).unwrap();
        let sigma = Assignment::parse("110").unwrap();
        assert_eq!(cheapest_proof_symmetric(&maj, sigma, &c).unwrap(), int(6));
        let f = maj.to_function().unwrap();
        for sigma in Assignment::all(3) {
            assert_eq!(cheapest_proof_symmetric(&maj, sigma, &c).unwrap(), cheapest_proof(&f, sigma, &c).unwrap().1);
        }
    }

    #[test]
    fn greedy_on_majority_stops_after_two_ones() {
        let maj = profile("0011");
        let f = maj.to_function().unwrap();
        let c = CostVector::unit(3);
        let t = crate::harness::run(&mut greedy_evaluator(&c), &f, Assignment::parse("110").unwrap(), &c).unwrap();
        assert_eq!(t.read_vars(), vec![0, 1]);
        assert_eq!(t.total_cost, int(2));
    }

    struct ExpensiveFirst(Vec<usize>);

    impl EvaluationAlgorithm for ExpensiveFirst {
        fn next_query(&mut self, history: &[Observation]) -> Option<usize> {
            self.0.iter().rev().copied().find(|v| history.iter().all(|(r, _)| r != v))
        }
    }

    #[test]
    fn adversary_forces_the_formula() {
        for (text, costs) in [("0011", [1, 1, 1]), ("0101", [1, 2, 4]), ("0111", [3, 1, 2]), ("1100", [2, 2, 5])] {
            let p = profile(text);
            let f = p.to_function().unwrap();
            let c = CostVector::from_ints(&costs).unwrap();
            let formula = gamma_c_formula(&p, &c).unwrap();
            let mut adv = symmetric_adversary(&p, &c).unwrap();
            let (report, _) = adversarial_ratio(&mut greedy_evaluator(&c), &f, &mut adv, &c).unwrap();
            assert_eq!(report.ratio, formula, "{text}");
            let exhaustive = competitive_ratio_exhaustive(|| greedy_evaluator(&c), &f, &c, false).unwrap();
            assert_eq!(exhaustive.ratio, formula, "{text}");
        }
    }

    #[test]
    fn adversary_beats_a_bad_algorithm_too() {
        let p = profile("0011");
        let f = p.to_function().unwrap();
        let c = CostVector::from_ints(&[1, 2, 4]).unwrap();
        let formula = gamma_c_formula(&p, &c).unwrap();
        let mut adv = symmetric_adversary(&p, &c).unwrap();
        let (report, _) = adversarial_ratio(&mut ExpensiveFirst(c.order()), &f, &mut adv, &c).unwrap();
        assert!(report.ratio >= formula);
    }
}

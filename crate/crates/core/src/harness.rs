//! The sequential-query contract and competitive-ratio measurement.
//!
//! Algorithms only choose which variable to read next. The harness owns
//! stopping: after every read it checks whether the values seen so far
//! determine `f`, and ends the run as soon as they do.

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cost::CostVector;
use crate::error::{Error, Result};
use crate::function::{Assignment, BooleanFunction, PartialAssignment};
use crate::proofs::CheapestProofIndex;
use crate::rational::{Ratio, Rational};

/// One `(variable, value)` observation.
pub type Observation = (usize, bool);

/// A deterministic, adaptive query strategy.
pub trait EvaluationAlgorithm {
    /// The next variable to read given everything read so far, or `None`
    /// if the strategy has nothing left to ask.
    fn next_query(&mut self, history: &[Observation]) -> Option<usize>;
}

impl<A: EvaluationAlgorithm + ?Sized> EvaluationAlgorithm for Box<A> {
    fn next_query(&mut self, history: &[Observation]) -> Option<usize> {
        (**self).next_query(history)
    }
}

/// An online answer strategy that builds a bad assignment for an algorithm.
pub trait Adversary {
    fn answer(&mut self, var: usize, history: &[Observation]) -> bool;

    /// A full assignment agreeing with every answer given.
    fn finalize(&mut self, history: &[Observation]) -> Assignment;
}

impl<A: Adversary + ?Sized> Adversary for Box<A> {
    fn answer(&mut self, var: usize, history: &[Observation]) -> bool {
        (**self).answer(var, history)
    }

    fn finalize(&mut self, history: &[Observation]) -> Assignment {
        (**self).finalize(history)
    }
}

/// Reads variables in nondecreasing cost order, ties by index.
#[derive(Debug, Clone)]
pub struct Greedy {
    order: Vec<usize>,
}

impl Greedy {
    pub fn new(c: &CostVector) -> Self {
        Greedy { order: c.order() }
    }
}

impl EvaluationAlgorithm for Greedy {
    fn next_query(&mut self, history: &[Observation]) -> Option<usize> {
        self.order.iter().copied().find(|v| history.iter().all(|(r, _)| r != v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadRecord {
    pub var: usize,
    pub value: bool,
    #[serde(with = "crate::rational::serde_rational")]
    pub cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationTranscript {
    pub reads: Vec<ReadRecord>,
    pub final_value: bool,
    #[serde(with = "crate::rational::serde_rational")]
    pub total_cost: Rational,
}

impl EvaluationTranscript {
    pub fn read_vars(&self) -> Vec<usize> {
        self.reads.iter().map(|r| r.var).collect()
    }

    /// Checks the transcript invariants by replay with brute-force
    /// determination.
    pub fn is_consistent_with(&self, f: &BooleanFunction) -> bool {
        let total = self.reads.iter().fold(Rational::zero(), |acc, r| acc + &r.cost);
        if total != self.total_cost {
            return false;
        }
        let mut p = PartialAssignment::empty(f.n());
        for r in &self.reads {
            if f.is_determined_brute(&p).is_some() {
                return false;
            }
            p = match p.bind(r.var, r.value) {
                Ok(p) => p,
                Err(_) => return false,
            };
        }
        f.is_determined_brute(&p) == Some(self.final_value)
    }
}

fn drive<A: EvaluationAlgorithm + ?Sized>(
    alg: &mut A,
    f: &BooleanFunction,
    c: &CostVector,
    mut oracle: impl FnMut(usize, &[Observation]) -> bool,
) -> Result<EvaluationTranscript> {
    if c.n() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: c.n() });
    }
    let mut history: Vec<Observation> = Vec::new();
    let mut reads = Vec::new();
    let mut p = PartialAssignment::empty(f.n());
    let mut total = Rational::zero();
    loop {
        if let Some(value) = f.is_determined(&p) {
            return Ok(EvaluationTranscript { reads, final_value: value, total_cost: total });
        }
        let var = alg
            .next_query(&history)
            .ok_or_else(|| Error::ContractViolation(format!("algorithm stalled with f undetermined after {p}")))?;
        if var >= f.n() {
            return Err(Error::ContractViolation(format!("queried x{var} but n = {}", f.n())));
        }
        if p.get(var).is_some() {
            return Err(Error::ContractViolation(format!("re-queried x{var}")));
        }
        let value = oracle(var, &history);
        history.push((var, value));
        p = p.bind(var, value)?;
        total += c.get(var);
        reads.push(ReadRecord { var, value, cost: c.get(var).clone() });
    }
}

/// Runs `alg` on the hidden assignment `sigma`.
pub fn run<A: EvaluationAlgorithm + ?Sized>(
    alg: &mut A,
    f: &BooleanFunction,
    sigma: Assignment,
    c: &CostVector,
) -> Result<EvaluationTranscript> {
    if sigma.n() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: sigma.n() });
    }
    drive(alg, f, c, |var, _| sigma.get(var))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentRow {
    pub assignment: Assignment,
    pub alg_cost: Rational,
    pub proof_cost: Rational,
    pub ratio: Ratio,
}

impl Serialize for AssignmentRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AssignmentRow", 4)?;
        st.serialize_field("assignment", &self.assignment.to_string())?;
        st.serialize_field("alg_cost", &self.alg_cost.to_string())?;
        st.serialize_field("proof_cost", &self.proof_cost.to_string())?;
        st.serialize_field("ratio", &self.ratio)?;
        st.end()
    }
}

/// Worst-case ratio of an algorithm together with the assignment attaining
/// it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub ratio: Ratio,
    pub worst_assignment: Assignment,
    pub alg_cost: Rational,
    pub proof_cost: Rational,
    pub per_assignment: Option<Vec<AssignmentRow>>,
}

impl Serialize for RatioReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = if self.per_assignment.is_some() { 5 } else { 4 };
        let mut st = s.serialize_struct("RatioReport", fields)?;
        st.serialize_field("ratio", &self.ratio)?;
        st.serialize_field("worst_assignment", &self.worst_assignment.to_string())?;
        st.serialize_field("alg_cost", &self.alg_cost.to_string())?;
        st.serialize_field("proof_cost", &self.proof_cost.to_string())?;
        if let Some(rows) = &self.per_assignment {
            st.serialize_field("per_assignment", rows)?;
        }
        st.end()
    }
}

/// γ_c^A(f): the maximum over all 2^n assignments of algorithm cost over
/// cheapest-proof cost. A fresh algorithm instance is spawned per
/// assignment. Ties keep the smallest assignment index.
pub fn competitive_ratio_exhaustive<A, M>(
    mut make: M,
    f: &BooleanFunction,
    c: &CostVector,
    keep_table: bool,
) -> Result<RatioReport>
where
    A: EvaluationAlgorithm,
    M: FnMut() -> A,
{
    let index = CheapestProofIndex::new(f, c)?;
    let mut best: Option<RatioReport> = None;
    let mut rows = keep_table.then(Vec::new);
    for sigma in Assignment::all(f.n()) {
        let transcript = run(&mut make(), f, sigma, c)?;
        let (_, proof_cost) = index.query(sigma);
        let ratio = Ratio::of(&transcript.total_cost, proof_cost);
        if let Some(rows) = rows.as_mut() {
            rows.push(AssignmentRow {
                assignment: sigma,
                alg_cost: transcript.total_cost.clone(),
                proof_cost: proof_cost.clone(),
                ratio: ratio.clone(),
            });
        }
        if best.as_ref().is_none_or(|b| ratio > b.ratio) {
            best = Some(RatioReport {
                ratio,
                worst_assignment: sigma,
                alg_cost: transcript.total_cost,
                proof_cost: proof_cost.clone(),
                per_assignment: None,
            });
        }
    }
    let mut report = best.expect("at least one assignment");
    report.per_assignment = rows;
    Ok(report)
}

/// Runs `alg` against `adv` and scores the finalized assignment. The result
/// is a lower-bound witness for the algorithm's competitive ratio.
pub fn adversarial_ratio<A, D>(
    alg: &mut A,
    f: &BooleanFunction,
    adv: &mut D,
    c: &CostVector,
) -> Result<(RatioReport, EvaluationTranscript)>
where
    A: EvaluationAlgorithm + ?Sized,
    D: Adversary + ?Sized,
{
    let transcript = drive(alg, f, c, |var, history| adv.answer(var, history))?;
    let history: Vec<Observation> = transcript.reads.iter().map(|r| (r.var, r.value)).collect();
    let sigma = adv.finalize(&history);
    if sigma.n() != f.n() {
        return Err(Error::InconsistentAdversary(format!("finalized {} variables, expected {}", sigma.n(), f.n())));
    }
    if let Some(&(var, value)) = history.iter().find(|&&(v, b)| sigma.get(v) != b) {
        return Err(Error::InconsistentAdversary(format!("answered x{var} = {} but finalized {sigma}", u8::from(value))));
    }
    let index = CheapestProofIndex::new(f, c)?;
    let (_, proof_cost) = index.query(sigma);
    let report = RatioReport {
        ratio: Ratio::of(&transcript.total_cost, proof_cost),
        worst_assignment: sigma,
        alg_cost: transcript.total_cost.clone(),
        proof_cost: proof_cost.clone(),
        per_assignment: None,
    };
    Ok((report, transcript))
}

/// The largest exhaustive ratio over a finite cost family: a lower estimate
/// of γ^A(f) = sup_c γ_c^A(f). Returns the ratio and the index of the cost
/// vector attaining it.
pub fn extremal_ratio_search<A, M>(
    mut make: M,
    f: &BooleanFunction,
    family: &[CostVector],
) -> Result<(Ratio, usize)>
where
    A: EvaluationAlgorithm,
    M: FnMut(&CostVector) -> A,
{
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut best: Option<(Ratio, usize)> = None;
    for (i, c) in family.iter().enumerate() {
        let report = competitive_ratio_exhaustive(|| make(c), f, c, false)?;
        if best.as_ref().is_none_or(|(r, _)| report.ratio > *r) {
            best = Some((report.ratio, i));
        }
    }
    Ok(best.expect("non-empty family"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::rational::{frac, int};

    struct Fixed(Vec<usize>);

    impl EvaluationAlgorithm for Fixed {
        fn next_query(&mut self, history: &[Observation]) -> Option<usize> {
            self.0.get(history.len()).copied()
        }
    }

    #[test]
    fn greedy_on_parity_reads_everything() {
        let f = generators::parity(3).unwrap();
        let c = CostVector::from_ints(&[1, 2, 4]).unwrap();
        for sigma in Assignment::all(3) {
            let t = run(&mut Greedy::new(&c), &f, sigma, &c).unwrap();
            assert_eq!(t.total_cost, int(7));
            assert!(t.is_consistent_with(&f));
        }
    }

    #[test]
    fn constant_function_reads_nothing() {
        let f = BooleanFunction::constant(3, true).unwrap();
        let c = CostVector::unit(3);
        let t = run(&mut Greedy::new(&c), &f, Assignment::new(3, 5), &c).unwrap();
        assert!(t.reads.is_empty());
        assert_eq!(t.total_cost, int(0));
        let r = competitive_ratio_exhaustive(|| Greedy::new(&c), &f, &c, false).unwrap();
        assert_eq!(r.ratio, Ratio::one());
    }

    #[test]
    fn contract_violations_are_reported() {
        let f = generators::parity(2).unwrap();
        let c = CostVector::unit(2);
        let sigma = Assignment::new(2, 0);
        assert!(matches!(run(&mut Fixed(vec![0, 0]), &f, sigma, &c), Err(Error::ContractViolation(_))));
        assert!(matches!(run(&mut Fixed(vec![0]), &f, sigma, &c), Err(Error::ContractViolation(_))));
        assert!(matches!(run(&mut Fixed(vec![5]), &f, sigma, &c), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn exhaustive_ratio_examples() {
        let parity = generators::parity(4).unwrap();
        let c = CostVector::from_ints(&[3, 1, 4, 1]).unwrap();
        let r = competitive_ratio_exhaustive(|| Greedy::new(&c), &parity, &c, true).unwrap();
        assert_eq!(r.ratio, Ratio::one());
        assert_eq!(r.per_assignment.as_ref().unwrap().len(), 16);

        let maj = generators::majority(3).unwrap();
        let unit = CostVector::unit(3);
        let r = competitive_ratio_exhaustive(|| Greedy::new(&unit), &maj, &unit, false).unwrap();
        assert_eq!(r.ratio, Ratio::Finite(frac(3, 2)));
        // the first two reads disagree, so greedy reads all three
        assert_eq!(r.worst_assignment.to_string(), "100");
    }

    #[test]
    fn zero_cost_proof_against_paid_reads_is_infinite() {
        let f = BooleanFunction::from_fn(2, |a| a.get(1)).unwrap();
        let c = CostVector::from_ints(&[1, 0]).unwrap();
        let r = competitive_ratio_exhaustive(|| Fixed(vec![0, 1]), &f, &c, false).unwrap();
        assert_eq!(r.ratio, Ratio::Infinite);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"ratio":"inf","worst_assignment":"00","alg_cost":"1","proof_cost":"0"}"#);
    }

    #[test]
    fn extremal_search_needs_a_family() {
        let f = generators::parity(2).unwrap();
        assert_eq!(extremal_ratio_search(Greedy::new, &f, &[]).unwrap_err(), Error::EmptyFamily);
    }
}

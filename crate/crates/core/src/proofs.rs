//! Proofs (certificates), minterms, maxterms and cheapest proofs.
//!
//! A proof for an assignment is a minimal set of variables whose values
//! force `f`. All enumeration goes through the 3^n determination table: a
//! partial assignment is a proof witness when it is determined and freeing
//! any one of its variables makes it undetermined.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::caps;
use crate::cost::CostVector;
use crate::dnf::{literal_vars, Literal, LiteralSet};
use crate::error::{Error, Result};
use crate::function::{bits_of, full_mask, Assignment, BooleanFunction, DeterminationTable, PartialAssignment};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Proof {
    pub vars: u32,
    pub witness: PartialAssignment,
    pub value: bool,
}

impl Proof {
    pub fn len(&self) -> usize {
        self.vars.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.vars == 0
    }

    /// The witness as a literal set: the literals it makes true.
    pub fn literals(&self) -> LiteralSet {
        self.witness.iter().map(|(v, b)| Literal::satisfied_by(v, b)).collect()
    }

    /// Checks both proof invariants directly against `f`.
    pub fn is_valid_for(&self, f: &BooleanFunction) -> bool {
        self.witness.mask() == self.vars
            && f.is_determined_brute(&self.witness) == Some(self.value)
            && bits_of(self.vars).all(|v| f.is_determined_brute(&self.witness.unbind(v)).is_none())
    }
}

#[derive(Debug, Clone)]
pub struct ProofSet {
    pub proofs: Vec<Proof>,
    /// Distinct variable sets of the proofs, sorted by (size, mask).
    pub var_sets: Vec<u32>,
}

impl ProofSet {
    pub fn max_size(&self) -> usize {
        self.proofs.iter().map(Proof::len).max().unwrap_or(0)
    }
}

fn for_each_witness(table: &DeterminationTable, mut visit: impl FnMut(u32, u32, bool)) {
    let n = table.n();
    let mut digits = vec![0u8; n];
    for p in 0..table.len() {
        if let Some(value) = table.forced_at(p) {
            let minimal = digits
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != 2)
                .all(|(i, &d)| table.forced_at(p + (2 - d as usize) * table.pow3(i)).is_none());
            if minimal {
                let (mut mask, mut values) = (0u32, 0u32);
                for (i, &d) in digits.iter().enumerate() {
                    if d != 2 {
                        mask |= 1 << i;
                        values |= u32::from(d) << i;
                    }
                }
                visit(mask, values, value);
            }
        }
        for d in digits.iter_mut() {
            if *d == 2 {
                *d = 0;
            } else {
                *d += 1;
                break;
            }
        }
    }
}

/// Every (variable set, witness) pair satisfying the proof invariants.
pub fn enumerate_proofs(f: &BooleanFunction) -> Result<ProofSet> {
    let table = f.determination_table()?;
    let mut proofs = Vec::new();
    let mut sets = BTreeSet::new();
    for_each_witness(table, |mask, values, value| {
        sets.insert((mask.count_ones(), mask));
        proofs.push(Proof { vars: mask, witness: PartialAssignment::from_masks(f.n(), mask, values), value });
    });
    Ok(ProofSet { proofs, var_sets: sets.into_iter().map(|(_, m)| m).collect() })
}

/// Distinct proof variable sets with supersets of other sets removed.
pub fn minimal_proof_sets(f: &BooleanFunction) -> Result<Vec<u32>> {
    let all = enumerate_proofs(f)?.var_sets;
    Ok(prune_supersets(&all))
}

pub(crate) fn prune_supersets(sets: &[u32]) -> Vec<u32> {
    // `sets` is sorted by size, so any subset of a set precedes it.
    let mut kept: Vec<u32> = Vec::new();
    for &s in sets {
        if !kept.iter().any(|&k| k & !s == 0) {
            kept.push(s);
        }
    }
    kept
}

/// PROOF(f): the largest proof size (0 for constants).
pub fn proof_size_max(f: &BooleanFunction) -> Result<usize> {
    let table = f.determination_table()?;
    let mut best = 0;
    for_each_witness(table, |mask, _, _| best = best.max(mask.count_ones() as usize));
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificates {
    pub minterms: Vec<LiteralSet>,
    pub maxterms: Vec<LiteralSet>,
}

impl Certificates {
    /// k(f): the largest minterm size.
    pub fn k(&self) -> usize {
        self.minterms.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// l(f): the largest maxterm size.
    pub fn l(&self) -> usize {
        self.maxterms.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_minterm(&self, set: &[Literal]) -> bool {
        self.minterms.binary_search_by(|m| m.as_slice().cmp(set)).is_ok()
    }
}

/// Minterms (literal sets forcing 1) and maxterms (literal sets whose
/// falsification forces 0) of a non-constant function. Both lists are
/// sorted, each set by literal.
pub fn certificates(f: &BooleanFunction) -> Result<Certificates> {
    if f.is_constant() {
        return Err(Error::Constant("minterms and maxterms need a non-constant function"));
    }
    let table = f.determination_table()?;
    let mut minterms = Vec::new();
    let mut maxterms = Vec::new();
    for_each_witness(table, |mask, values, value| {
        // A maxterm literal is the one a binding makes false.
        let set: LiteralSet = bits_of(mask)
            .map(|v| {
                let b = values >> v & 1 == 1;
                if value { Literal::satisfied_by(v, b) } else { Literal::satisfied_by(v, !b) }
            })
            .collect();
        if value {
            minterms.push(set);
        } else {
            maxterms.push(set);
        }
    });
    minterms.sort();
    maxterms.sort();
    Ok(Certificates { minterms, maxterms })
}

pub fn minterms(f: &BooleanFunction) -> Result<Vec<LiteralSet>> {
    certificates(f).map(|c| c.minterms)
}

pub fn maxterms(f: &BooleanFunction) -> Result<Vec<LiteralSet>> {
    certificates(f).map(|c| c.maxterms)
}

/// For monotone `f`, a minterm `minterm` and one of its variables, a maxterm
/// meeting the minterm in exactly that variable (lexicographically least).
pub fn crossing_certificate(f: &BooleanFunction, minterm: &[Literal], var: usize) -> Result<LiteralSet> {
    if !f.is_monotone() {
        return Err(Error::NotMonotone);
    }
    if !minterm.iter().any(|l| l.var == var) {
        return Err(Error::NotInCertificate(var));
    }
    let certs = certificates(f)?;
    let vars = literal_vars(minterm);
    certs
        .maxterms
        .into_iter()
        .find(|m| literal_vars(m) & vars == 1 << var)
        .ok_or(Error::NoCrossingCertificate(var))
}

/// Answers cheapest-proof queries for one (function, cost) pair: variable
/// sets are pre-sorted by (cost, size, mask) and each query scans for the
/// first set that determines `f` under the assignment. The first hit is
/// minimal because any determining subset would sort before it.
pub struct CheapestProofIndex<'a> {
    f: &'a BooleanFunction,
    order: Vec<u32>,
    costs: Vec<Rational>,
}

impl<'a> CheapestProofIndex<'a> {
    pub fn new(f: &'a BooleanFunction, c: &CostVector) -> Result<Self> {
        let n = f.n();
        if c.n() != n {
            return Err(Error::LengthMismatch { expected: n, got: c.n() });
        }
        caps::check_exhaustive(n)?;
        f.determination_table()?;
        let size = 1usize << n;
        let mut costs = vec![Rational::zero(); size];
        for m in 1..size {
            let low = m.trailing_zeros() as usize;
            costs[m] = &costs[m & (m - 1)] + c.get(low);
        }
        let mut order: Vec<u32> = (0..size as u32).collect();
        order.sort_by(|&a, &b| {
            costs[a as usize]
                .cmp(&costs[b as usize])
                .then(a.count_ones().cmp(&b.count_ones()))
                .then(a.cmp(&b))
        });
        Ok(CheapestProofIndex { f, order, costs })
    }

    pub fn query(&self, sigma: Assignment) -> (Proof, &Rational) {
        let table = self.f.determination().expect("checked in new");
        for &mask in &self.order {
            if let Some(value) = table.forced(mask, sigma.bits()) {
                let proof = Proof { vars: mask, witness: sigma.project(mask), value };
                return (proof, &self.costs[mask as usize]);
            }
        }
        unreachable!("the full variable set always determines f")
    }

    pub fn cost_of(&self, mask: u32) -> &Rational {
        &self.costs[mask as usize]
    }
}

/// The cheapest proof for `f` under `sigma`, with its cost.
pub fn cheapest_proof(f: &BooleanFunction, sigma: Assignment, c: &CostVector) -> Result<(Proof, Rational)> {
    if sigma.n() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: sigma.n() });
    }
    let index = CheapestProofIndex::new(f, c)?;
    let (proof, cost) = index.query(sigma);
    Ok((proof, cost.clone()))
}

/// The cheapest proof cost by plain enumeration of all variable subsets.
/// Kept independent of the index for cross-checks.
pub fn cheapest_proof_cost_brute(f: &BooleanFunction, sigma: Assignment, c: &CostVector) -> Rational {
    (0..=full_mask(f.n()))
        .filter(|&m| f.is_determined_brute(&sigma.project(m)).is_some())
        .map(|m| c.of_mask(m))
        .min()
        .expect("the full set determines f")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::rational::int;

    fn f_of(n: usize, g: impl Fn(Assignment) -> bool) -> BooleanFunction {
        BooleanFunction::from_fn(n, g).unwrap()
    }

    #[test]
    fn proofs_of_small_functions() {
        let x = f_of(1, |a| a.get(0));
        assert_eq!(enumerate_proofs(&x).unwrap().var_sets, vec![0b1]);
        let and = f_of(2, |a| a.get(0) && a.get(1));
        assert_eq!(enumerate_proofs(&and).unwrap().var_sets, vec![0b01, 0b10, 0b11]);
        let parity = generators::parity(4).unwrap();
        assert_eq!(enumerate_proofs(&parity).unwrap().var_sets, vec![0b1111]);
        let constant = BooleanFunction::constant(3, true).unwrap();
        let ps = enumerate_proofs(&constant).unwrap();
        assert_eq!(ps.proofs.len(), 1);
        assert!(ps.proofs[0].is_empty());
        assert_eq!(proof_size_max(&constant).unwrap(), 0);
    }

    #[test]
    fn proof_size_examples() {
        assert_eq!(proof_size_max(&generators::parity(5).unwrap()).unwrap(), 5);
    }

    #[test]
    fn over_cap_is_rejected() {
        let big = BooleanFunction::constant(15, false).unwrap();
        assert!(matches!(enumerate_proofs(&big), Err(Error::InstanceTooLarge { .. })));
    }

    #[test]
    fn cheapest_proof_examples() {
        let or = f_of(2, |a| a.get(0) || a.get(1));
        let (p, cost) = cheapest_proof(&or, Assignment::parse("11").unwrap(), &CostVector::from_ints(&[3, 5]).unwrap()).unwrap();
        assert_eq!((p.vars, cost), (0b01, int(3)));

        let parity = generators::parity(3).unwrap();
        let c = CostVector::from_ints(&[1, 2, 4]).unwrap();
        for sigma in Assignment::all(3) {
            let (p, cost) = cheapest_proof(&parity, sigma, &c).unwrap();
            assert_eq!((p.vars, cost), (0b111, int(7)));
        }

        let maj = generators::majority(3).unwrap();
        let c = CostVector::from_ints(&[5, 1, 7]).unwrap();
        let sigma = Assignment::parse("110").unwrap();
        let (p, cost) = cheapest_proof(&maj, sigma, &c).unwrap();
        assert_eq!((p.vars, cost.clone()), (0b011, int(6)));
        assert_eq!(cheapest_proof_cost_brute(&maj, sigma, &c), cost);
    }

    #[test]
    fn zero_cost_variables_do_not_break_minimality() {
        let f = f_of(3, |a| a.get(0) || (a.get(1) && a.get(2)));
        let c = CostVector::from_ints(&[4, 0, 0]).unwrap();
        let (p, cost) = cheapest_proof(&f, Assignment::parse("111").unwrap(), &c).unwrap();
        assert_eq!((p.vars, cost), (0b110, int(0)));
        assert!(p.is_valid_for(&f));
    }

    #[test]
    fn certificate_examples() {
        let and = f_of(2, |a| a.get(0) && a.get(1));
        let c = certificates(&and).unwrap();
        assert_eq!(c.minterms, vec![vec![Literal::pos(0), Literal::pos(1)]]);
        assert_eq!(c.maxterms, vec![vec![Literal::pos(0)], vec![Literal::pos(1)]]);
        assert_eq!((c.k(), c.l()), (2, 1));
        assert!(matches!(certificates(&BooleanFunction::constant(2, false).unwrap()), Err(Error::Constant(_))));

        let xor = f_of(2, |a| a.get(0) != a.get(1));
        let c = certificates(&xor).unwrap();
        assert_eq!(c.minterms, vec![vec![Literal::pos(0), Literal::neg(1)], vec![Literal::neg(0), Literal::pos(1)]]);
        assert_eq!(c.maxterms, vec![vec![Literal::pos(0), Literal::pos(1)], vec![Literal::neg(0), Literal::neg(1)]]);
    }

    #[test]
    fn crossing_certificate_examples() {
        let and = f_of(2, |a| a.get(0) && a.get(1));
        let both = [Literal::pos(0), Literal::pos(1)];
        assert_eq!(crossing_certificate(&and, &both, 0).unwrap(), vec![Literal::pos(0)]);

        let f = f_of(3, |a| (a.get(0) && a.get(1)) || a.get(2));
        let c = crossing_certificate(&f, &both, 1).unwrap();
        assert_eq!(c, vec![Literal::pos(1), Literal::pos(2)]);

        let xor = f_of(2, |a| a.get(0) != a.get(1));
        assert_eq!(crossing_certificate(&xor, &both, 0), Err(Error::NotMonotone));
        assert_eq!(crossing_certificate(&and, &[Literal::pos(0)], 1), Err(Error::NotInCertificate(1)));
    }

    #[test]
    fn crossing_certificate_on_switched_restriction() {
        let g = generators::switching_function();
        // fix z = 1: the remainder is x3 & x4 on (x1, x2, x3, x4)
        let r = g.restrict(&PartialAssignment::from_pairs(5, &[(0, true)]).unwrap()).unwrap();
        let c = [Literal::pos(2), Literal::pos(3)];
        assert_eq!(crossing_certificate(&r.function, &c, 2).unwrap(), vec![Literal::pos(2)]);
    }
}

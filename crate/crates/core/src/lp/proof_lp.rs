//! The proof-set covering LP: minimize `Σ s(x)` subject to `Σ_{x∈P} s(x) ≥ 1`
//! for every proof variable set `P`, and its maximum over restrictions.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::simplex::{covering_optimum, minimize, Cmp, Constraint, LinearProgram, LpOutcome};
use crate::caps;
use crate::error::Result;
use crate::function::{bits_of, full_mask, BooleanFunction, PartialAssignment};
use crate::proofs::{enumerate_proofs, prune_supersets};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLp {
    pub n: usize,
    /// Every distinct proof variable set, sorted by (size, mask).
    pub rows: Vec<u32>,
    /// `rows` without supersets of other rows. Same feasible region.
    pub pruned: Vec<u32>,
}

impl ProofLp {
    /// Builds the LP from raw rows (deduplicated and sorted here).
    pub fn from_rows(n: usize, rows: &[u32]) -> Self {
        let mut rows: Vec<u32> = rows.iter().copied().filter(|&r| r != 0).collect();
        rows.sort_by_key(|&r| (r.count_ones(), r));
        rows.dedup();
        let pruned = prune_supersets(&rows);
        ProofLp { n, rows, pruned }
    }

    pub fn is_feasible(&self, s: &[Rational]) -> bool {
        s.len() == self.n
            && s.iter().all(|x| !x.is_negative())
            && self.rows.iter().all(|&r| bits_of(r).fold(Rational::zero(), |acc, v| acc + &s[v]) >= Rational::one())
    }
}

pub fn build_lp(f: &BooleanFunction) -> Result<ProofLp> {
    let proofs = enumerate_proofs(f)?;
    Ok(ProofLp::from_rows(f.n(), &proofs.var_sets))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    /// Optimal, with a dual certificate.
    Optimal,
    /// Feasible only (a constructed solution).
    Feasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub s: Vec<Rational>,
    pub objective: Rational,
    pub rows: usize,
    pub status: LpStatus,
    /// For optimal solutions: a dual vector over the pruned rows with the
    /// same objective.
    pub dual: Vec<Rational>,
}

impl LpSolution {
    /// Checks primal feasibility, `objective = Σ s`, and for optimal
    /// solutions dual feasibility with a matching dual objective.
    pub fn certify(&self, lp: &ProofLp) -> bool {
        let total = self.s.iter().fold(Rational::zero(), |acc, x| acc + x);
        if !lp.is_feasible(&self.s) || total != self.objective {
            return false;
        }
        match self.status {
            LpStatus::Feasible => true,
            LpStatus::Optimal => {
                if self.dual.len() != lp.pruned.len() || self.dual.iter().any(|y| y.is_negative()) {
                    return false;
                }
                let dual_total = self.dual.iter().fold(Rational::zero(), |acc, y| acc + y);
                dual_total == self.objective
                    && (0..lp.n).all(|v| {
                        lp.pruned
                            .iter()
                            .zip(&self.dual)
                            .filter(|(&r, _)| r >> v & 1 == 1)
                            .fold(Rational::zero(), |acc, (_, y)| acc + y)
                            <= Rational::one()
                    })
            }
        }
    }
}

impl Serialize for LpSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Values<'a>(&'a [Rational]);
        impl Serialize for Values<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (i, v) in self.0.iter().enumerate() {
                    map.serialize_entry(&format!("x{i}"), &v.to_string())?;
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("LpSolution", 4)?;
        st.serialize_field("s", &Values(&self.s))?;
        st.serialize_field("objective", &self.objective.to_string())?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("status", &self.status)?;
        st.end()
    }
}

/// The LP optimum alone.
pub fn lp_objective(lp: &ProofLp) -> Rational {
    covering_optimum(&lp.pruned, lp.n).0
}

/// Solves the LP exactly. Among all optimal solutions the leximin one is
/// returned: its smallest entry is as large as possible, then the next
/// smallest, and so on. It is unique, and symmetric when the LP is.
pub fn solve_lp(lp: &ProofLp) -> LpSolution {
    let n = lp.n;
    let (opt, dual, _) = covering_optimum(&lp.pruned, n);
    let mut fixed: Vec<Option<Rational>> = vec![None; n];
    if lp.pruned.is_empty() {
        fixed = vec![Some(Rational::zero()); n];
    }
    while fixed.iter().any(Option::is_none) {
        let free: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
        let fixed_total = fixed.iter().flatten().fold(Rational::zero(), |acc, x| acc + x);
        let remaining = &opt - &fixed_total;

        // maximize t over optimal solutions with s_v ≥ t on free variables
        let t_col = free.len();
        let mut base = leximin_base(lp, &fixed, &free, &remaining);
        let mut with_t = base.clone();
        for i in 0..free.len() {
            with_t.push(Constraint { coefs: vec![(i, Rational::one()), (t_col, -Rational::one())], cmp: Cmp::Ge, rhs: Rational::zero() });
        }
        let mut objective = vec![Rational::zero(); free.len() + 1];
        objective[t_col] = -Rational::one();
        let LpOutcome::Optimal { x, value } = minimize(&LinearProgram { num_vars: free.len() + 1, objective, constraints: with_t }) else {
            unreachable!("the optimal face is nonempty and t is bounded by the total")
        };
        let t_star = -value;
        if &t_star * Rational::from_integer(free.len().into()) == remaining {
            for &v in &free {
                fixed[v] = Some(t_star.clone());
            }
            break;
        }

        // a free variable is pinned at t* when it cannot rise above it
        for i in 0..free.len() {
            base.push(Constraint { coefs: vec![(i, Rational::one())], cmp: Cmp::Ge, rhs: t_star.clone() });
        }
        let mut pinned = Vec::new();
        for (i, &v) in free.iter().enumerate() {
            if x[i] != t_star {
                continue;
            }
            let mut objective = vec![Rational::zero(); free.len()];
            objective[i] = -Rational::one();
            let lp_i = LinearProgram { num_vars: free.len(), objective, constraints: base.clone() };
            let LpOutcome::Optimal { value, .. } = minimize(&lp_i) else {
                unreachable!("bounded by the total")
            };
            if -value == t_star {
                pinned.push(v);
            }
        }
        assert!(!pinned.is_empty(), "leximin step pins at least one variable");
        for v in pinned {
            fixed[v] = Some(t_star.clone());
        }
    }
    let s: Vec<Rational> = fixed.into_iter().map(|x| x.expect("all fixed")).collect();
    LpSolution { s, objective: opt, rows: lp.rows.len(), status: LpStatus::Optimal, dual }
}

/// Covering rows and the optimal-total equation over the free variables,
/// with fixed values substituted.
fn leximin_base(lp: &ProofLp, fixed: &[Option<Rational>], free: &[usize], remaining: &Rational) -> Vec<Constraint> {
    let mut out = Vec::with_capacity(lp.pruned.len() + 1);
    for &r in &lp.pruned {
        let mut need = Rational::one();
        let mut coefs = Vec::new();
        for v in bits_of(r) {
            match &fixed[v] {
                Some(x) => need -= x,
                None => coefs.push((free.binary_search(&v).expect("free"), Rational::one())),
            }
        }
        if need.is_positive() {
            out.push(Constraint { coefs, cmp: Cmp::Ge, rhs: need });
        }
    }
    out.push(Constraint {
        coefs: (0..free.len()).map(|i| (i, Rational::one())).collect(),
        cmp: Cmp::Eq,
        rhs: remaining.clone(),
    });
    out
}

/// Δ(f) with a restriction attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub value: Rational,
    pub witness: PartialAssignment,
    /// Distinct restrictions whose LP was solved.
    pub distinct: usize,
}

/// Δ(f): the largest LP optimum over all restrictions `f_Y`, where `Y`
/// ranges over partial assignments that leave at least one variable free
/// (the empty one included). Constant restrictions contribute 0.
/// Restrictions are reduced to their essential variables and memoized.
// hashing ignores the lazily built determination table
#[allow(clippy::mutable_key_type)]
pub fn delta(f: &BooleanFunction) -> Result<DeltaReport> {
    let n = f.n();
    caps::check_exhaustive(n)?;
    let full = full_mask(n);
    let mut raw_cache: HashMap<BooleanFunction, Rational> = HashMap::new();
    let mut reduced_cache: HashMap<BooleanFunction, Rational> = HashMap::new();
    let mut best = (Rational::zero(), PartialAssignment::empty(n));
    for mask in 0..full {
        let mut values = 0u32;
        loop {
            let restriction = f.restrict_unchecked(mask, values);
            let g = &restriction.function;
            if !g.is_constant() {
                let value = match raw_cache.get(g) {
                    Some(v) => v.clone(),
                    None => {
                        let reduced = g.essential().function;
                        let v = match reduced_cache.get(&reduced) {
                            Some(v) => v.clone(),
                            None => {
                                let v = lp_objective(&build_lp(&reduced)?);
                                reduced_cache.insert(reduced, v.clone());
                                v
                            }
                        };
                        raw_cache.insert(g.clone(), v.clone());
                        v
                    }
                };
                if value > best.0 {
                    best = (value, PartialAssignment::from_masks(n, mask, values));
                }
            }
            // next subset of mask
            if values == mask {
                break;
            }
            values = (values.wrapping_sub(mask)) & mask;
        }
    }
    Ok(DeltaReport { value: best.0, witness: best.1, distinct: reduced_cache.len() })
}

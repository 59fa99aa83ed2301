//! The LP-guided evaluator: read `argmin c(v)/s(v)` under the optimal LP
//! solution of the current restriction, then recurse.
//!
//! With [`LpaRule::Residual`] each step charges `δ·s(v)` to every unread
//! variable, `δ` being the minimum ratio, and later steps compare residual
//! costs. Reads then never cost more than `Δ(f)` times the cheapest proof.
//! [`LpaRule::Fresh`] compares the original costs at every step and has no
//! such guarantee.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::proof_lp::{build_lp, solve_lp, LpSolution};
use crate::caps;
use crate::cost::CostVector;
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::harness::{EvaluationAlgorithm, Observation};
use crate::rational::Rational;

/// Leximin LP solutions keyed by essential-variable reductions. Shared by
/// every run on the same function.
#[derive(Debug, Default, Clone)]
pub struct LpCache {
    inner: Arc<Mutex<HashMap<BooleanFunction, Arc<LpSolution>>>>,
}

impl LpCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The LP solution of `f` on all of its variables; variables `f` does
    /// not depend on get 0.
    pub fn solution_for(&self, f: &BooleanFunction) -> Result<Vec<Rational>> {
        let reduced = f.essential();
        let cached = self.inner.lock().expect("cache lock").get(&reduced.function).cloned();
        let sol = match cached {
            Some(sol) => sol,
            None => {
                let sol = Arc::new(solve_lp(&build_lp(&reduced.function)?));
                self.inner.lock().expect("cache lock").insert(reduced.function.clone(), Arc::clone(&sol));
                sol
            }
        };
        let mut s = vec![Rational::zero(); f.n()];
        for (local, &var) in reduced.vars.iter().enumerate() {
            s[var] = sol.s[local].clone();
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `c(v)/s(v)` with the conventions of the LPA read rule: free variables
/// rank first, and `s(v) = 0` with positive cost ranks last.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Key {
    Free,
    Ratio(Rational),
    Never,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Key::Free, Key::Free) | (Key::Never, Key::Never) => Ordering::Equal,
            (Key::Free, _) | (_, Key::Never) => Ordering::Less,
            (_, Key::Free) | (Key::Never, _) => Ordering::Greater,
            (Key::Ratio(a), Key::Ratio(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LpaRule {
    #[default]
    Residual,
    Fresh,
}

#[derive(Debug, Clone)]
pub struct Lpa {
    f: BooleanFunction,
    c: CostVector,
    cache: LpCache,
    rule: LpaRule,
}

/// LPA on `f` with costs `c` under the residual-cost rule. Pass a shared
/// cache to reuse LP solutions across runs.
pub fn lpa_evaluator(f: &BooleanFunction, c: &CostVector, cache: &LpCache) -> Result<Lpa> {
    lpa_evaluator_with(f, c, cache, LpaRule::Residual)
}

pub fn lpa_evaluator_with(f: &BooleanFunction, c: &CostVector, cache: &LpCache, rule: LpaRule) -> Result<Lpa> {
    caps::check_proof(f.n())?;
    if c.n() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), got: c.n() });
    }
    Ok(Lpa { f: f.clone(), c: c.clone(), cache: cache.clone(), rule })
}

impl Lpa {
    /// The variable to read after `history` given current costs `cost`,
    /// with the minimum ratio and the LP solution over all variables.
    fn step(&self, history: &[Observation], cost: &[Rational]) -> Option<(usize, Rational, Vec<Rational>)> {
        let (mut mask, mut values) = (0u32, 0u32);
        for &(v, b) in history {
            mask |= 1 << v;
            values |= u32::from(b) << v;
        }
        let restriction = self.f.restrict_unchecked(mask, values);
        if restriction.function.n() == 0 {
            return None;
        }
        let local = self.cache.solution_for(&restriction.function).ok()?;
        let mut s = vec![Rational::zero(); self.f.n()];
        for (i, &var) in restriction.vars.iter().enumerate() {
            s[var] = local[i].clone();
        }
        let (key, var) = restriction
            .vars
            .iter()
            .map(|&var| {
                let key = if cost[var].is_zero() {
                    Key::Free
                } else if s[var].is_zero() {
                    Key::Never
                } else {
                    Key::Ratio(&cost[var] / &s[var])
                };
                (key, var)
            })
            .min()?;
        let delta = match key {
            Key::Ratio(r) => r,
            _ => Rational::zero(),
        };
        Some((var, delta, s))
    }
}

impl EvaluationAlgorithm for Lpa {
    fn next_query(&mut self, history: &[Observation]) -> Option<usize> {
        let mut cost: Vec<Rational> = (0..self.f.n()).map(|v| self.c.get(v).clone()).collect();
        if self.rule == LpaRule::Residual {
            // replay the charges of the earlier steps
            for t in 0..history.len() {
                let (_, delta, s) = self.step(&history[..t], &cost)?;
                if !delta.is_zero() {
                    for (c, sv) in cost.iter_mut().zip(&s) {
                        *c -= &delta * sv;
                    }
                }
            }
        }
        self.step(history, &cost).map(|(var, _, _)| var)
    }
}

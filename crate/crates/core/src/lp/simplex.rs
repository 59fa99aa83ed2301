//! A small exact simplex: dense tableau over big rationals, two phases,
//! Bland's rule. Adequate for the covering LPs here, which have at most a
//! few dozen columns.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` pairs.
    pub coefs: Vec<(usize, Rational)>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

/// Minimize `objective · x` subject to `constraints` and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs; the objective equals `z + Σ d_j x_j` over nonbasics.
    d: Vec<Rational>,
    z: Rational,
}

impl Tableau {
    fn with_objective(&mut self, cost: &[Rational]) {
        self.d = cost.to_vec();
        self.z = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            self.z += &cb * &self.rhs[i];
            for (j, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    self.d[j] -= &cb * a;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for a in self.rows[r].iter_mut() {
                if !a.is_zero() {
                    *a /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let support: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.d[c].is_zero() {
            let factor = self.d[c].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                self.d[j] -= delta;
            }
            self.z += &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Bland's rule over the columns `allowed` admits. Returns false when
    /// the objective is unbounded below.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let Some(c) = (0..self.d.len()).find(|&j| allowed(j) && self.d[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn solution(&self, num_vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// Two-phase simplex with Bland's anti-cycling rule.
pub fn minimize(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars;
    let m = lp.constraints.len();
    let slack_count = lp.constraints.iter().filter(|c| c.cmp != Cmp::Eq).count();
    let first_art = n + slack_count;
    let mut art_count = 0;
    for c in &lp.constraints {
        let flipped = c.rhs.is_negative();
        let cmp = match (c.cmp, flipped) {
            (Cmp::Le, true) => Cmp::Ge,
            (Cmp::Ge, true) => Cmp::Le,
            (cmp, _) => cmp,
        };
        if cmp != Cmp::Le {
            art_count += 1;
        }
    }
    let width = first_art + art_count;
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        d: Vec::new(),
        z: Rational::zero(),
    };
    let (mut slack, mut art) = (n, first_art);
    for c in &lp.constraints {
        let sign = if c.rhs.is_negative() { -Rational::one() } else { Rational::one() };
        let mut row = vec![Rational::zero(); width];
        for (v, a) in &c.coefs {
            row[*v] += a * &sign;
        }
        let cmp = match (c.cmp, sign.is_negative()) {
            (Cmp::Le, true) => Cmp::Ge,
            (Cmp::Ge, true) => Cmp::Le,
            (cmp, _) => cmp,
        };
        let basic = match cmp {
            Cmp::Le => {
                row[slack] = Rational::one();
                slack += 1;
                slack - 1
            }
            Cmp::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
                row[art] = Rational::one();
                art += 1;
                art - 1
            }
            Cmp::Eq => {
                row[art] = Rational::one();
                art += 1;
                art - 1
            }
        };
        t.rows.push(row);
        t.rhs.push(&c.rhs * &sign);
        t.basis.push(basic);
    }

    if art_count > 0 {
        let phase1: Vec<Rational> =
            (0..width).map(|j| if j >= first_art { Rational::one() } else { Rational::zero() }).collect();
        t.with_objective(&phase1);
        t.optimize(|_| true);
        if t.z.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis; rows where that is impossible
        // are redundant and dropped.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_art {
                if let Some(c) = (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, c);
                    i += 1;
                } else {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = lp.objective.clone();
    cost.resize(width, Rational::zero());
    t.with_objective(&cost);
    if !t.optimize(|j| j < first_art) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal { x: t.solution(n), value: t.z.clone() }
}

/// Optimum of `min Σ s` subject to `Σ_{v∈row} s_v ≥ 1` for each row mask,
/// solved through its dual `max Σ y` subject to `Σ_{row∋v} y_row ≤ 1`,
/// whose slack basis is feasible from the start.
///
/// Returns `(optimum, y, s)`: an optimal dual `y` (one entry per row) and
/// the primal vertex `s` read off the slack reduced costs.
pub fn covering_optimum(rows: &[u32], n: usize) -> (Rational, Vec<Rational>, Vec<Rational>) {
    let m = rows.len();
    let width = m + n;
    let mut t = Tableau {
        rows: Vec::with_capacity(n),
        rhs: vec![Rational::one(); n],
        basis: (m..width).collect(),
        d: Vec::new(),
        z: Rational::zero(),
    };
    for v in 0..n {
        let mut row = vec![Rational::zero(); width];
        for (r, &mask) in rows.iter().enumerate() {
            if mask >> v & 1 == 1 {
                row[r] = Rational::one();
            }
        }
        row[m + v] = Rational::one();
        t.rows.push(row);
    }
    let cost: Vec<Rational> = (0..width).map(|j| if j < m { -Rational::one() } else { Rational::zero() }).collect();
    t.with_objective(&cost);
    let bounded = t.optimize(|_| true);
    debug_assert!(bounded, "y is boxed by the unit right-hand side");
    let y = t.solution(m);
    let s = (0..n).map(|v| t.d[m + v].clone()).collect();
    (-t.z.clone(), y, s)
}

//! The (k, t) family: `⋁_i ⋁_j x_{i,j} ∧ ℓ_1(j) ∧ … ∧ ℓ_k(j)` where `ℓ_s(j)`
//! is `z_s` when bit `s-1` of `j` is set and `¬z_s` otherwise.
//!
//! Variable layout: `x_{i,j}` (i in 1..=t, j in 0..2^k) is variable
//! `(i-1)·2^k + j`, and `z_s` is variable `t·2^k + s - 1`.

use crate::caps;
use crate::dnf::{Dnf, Literal};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub k: usize,
    pub t: usize,
}

impl FamilySpec {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        if k < 1 || t < 1 {
            return Err(Error::Invalid(format!("family needs k ≥ 1 and t ≥ 1, got k = {k}, t = {t}")));
        }
        let n = (1usize << k.min(32)).checked_mul(t).and_then(|x| x.checked_add(k)).unwrap_or(usize::MAX);
        caps::check_table(n)?;
        Ok(FamilySpec { k, t })
    }

    pub fn n(&self) -> usize {
        self.t * (1 << self.k) + self.k
    }

    pub fn x_var(&self, i: usize, j: usize) -> usize {
        (i - 1) * (1 << self.k) + j
    }

    pub fn z_var(&self, s: usize) -> usize {
        self.t * (1 << self.k) + s - 1
    }

    pub fn z_vars(&self) -> Vec<usize> {
        (1..=self.k).map(|s| self.z_var(s)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Family {
    pub spec: FamilySpec,
    pub function: BooleanFunction,
    pub dnf: Dnf,
    pub labels: Vec<String>,
}

pub fn make_family(spec: FamilySpec) -> Result<Family> {
    let n = spec.n();
    caps::check_table(n)?;
    let width = 1usize << spec.k;
    let mut terms = Vec::with_capacity(spec.t * width);
    let mut labels = vec![String::new(); n];
    for i in 1..=spec.t {
        for j in 0..width {
            let mut term = vec![Literal::pos(spec.x_var(i, j))];
            for s in 1..=spec.k {
                let z = spec.z_var(s);
                term.push(if j >> (s - 1) & 1 == 1 { Literal::pos(z) } else { Literal::neg(z) });
            }
            terms.push(term);
            labels[spec.x_var(i, j)] = format!("x{i}.{j}");
        }
    }
    for s in 1..=spec.k {
        labels[spec.z_var(s)] = format!("z{s}");
    }
    let dnf = Dnf::new(n, terms)?;
    let function = dnf.to_function()?;
    Ok(Family { spec, function, dnf, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::proof_size_max;

    #[test]
    fn smallest_members() {
        let fam = make_family(FamilySpec::new(1, 2).unwrap()).unwrap();
        assert_eq!(fam.dnf.to_string(), "x0 & !x4 | x1 & x4 | x2 & !x4 | x3 & x4");
        assert_eq!(fam.labels, vec!["x1.0", "x1.1", "x2.0", "x2.1", "z1"]);
        assert_eq!(proof_size_max(&fam.function).unwrap(), 4);
        assert!(FamilySpec::new(0, 1).is_err());
        assert!(FamilySpec::new(3, 9).is_err());
    }
}

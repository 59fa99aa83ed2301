//! Functions that factor over a set `Z` of mixed-polarity variables:
//! `f = ⋁_a (z = a) ∧ f_a`, where every other variable occurs in the DNF
//! with a single polarity. After flipping the negative-only variables each
//! `f_a` is monotone.
//!
//! Γ(f) is the largest PROOF(f_a) and G the set of `a` attaining it. With
//! a suitable certificate of `f_a`, the adversary below forces ratio
//! `k + Γ` on every algorithm, and the averaged LP solution shows Δ(f) is
//! at most `k + Γ`.

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::proof_lp::{build_lp, solve_lp, LpSolution, LpStatus, ProofLp};
use crate::caps;
use crate::cost::CostVector;
use crate::dnf::Dnf;
use crate::error::{Error, Result};
use crate::function::{bits_of, full_mask, Assignment, BooleanFunction};
use crate::harness::{Adversary, Observation};
use crate::proofs::{certificates, enumerate_proofs, proof_size_max};
use crate::rational::{int, Rational};

/// Which certificate family the side condition is checked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateSide {
    Minterm,
    Maxterm,
}

#[derive(Debug, Clone)]
pub struct FactoredFunction {
    pub function: BooleanFunction,
    /// The mixed variables, in the order defining `a`: bit `i` of `a` is
    /// the value of `z[i]`.
    pub z: Vec<usize>,
    pub x_mask: u32,
    /// Variables that occur only negated and are flipped to positive.
    pub flip: u32,
    normalized: BooleanFunction,
    /// PROOF(f_a) for each `a`.
    pub proof_sizes: Vec<usize>,
}

impl FactoredFunction {
    /// Checks the polarity hypothesis on `dnf`. When `z` is `None` the
    /// mixed-polarity variables are taken as `Z`.
    pub fn new(dnf: &Dnf, z: Option<&[usize]>) -> Result<Self> {
        let n = dnf.n();
        let mixed: Vec<usize> = (0..n).filter(|&v| dnf.polarities(v) == (true, true)).collect();
        let z: Vec<usize> = match z {
            None => mixed.clone(),
            Some(given) => {
                let mut given = given.to_vec();
                given.sort_unstable();
                given.dedup();
                if let Some(&v) = given.iter().find(|&&v| v >= n) {
                    return Err(Error::VariableOutOfRange { var: v, n });
                }
                given
            }
        };
        if let Some(&v) = z.iter().find(|&&v| dnf.polarities(v) != (true, true)) {
            return Err(Error::HypothesisNotMet(format!("x{v} is in Z but does not occur in both polarities")));
        }
        if let Some(&v) = mixed.iter().find(|v| !z.contains(v)) {
            return Err(Error::HypothesisNotMet(format!("x{v} is outside Z but occurs in both polarities")));
        }
        if z.is_empty() {
            return Err(Error::HypothesisNotMet("no variable occurs in both polarities".into()));
        }
        let z_mask = z.iter().fold(0u32, |m, &v| m | 1 << v);
        let x_mask = full_mask(n) & !z_mask;
        let flip = bits_of(x_mask).filter(|&v| dnf.polarities(v) == (false, true)).fold(0, |m, v| m | 1 << v);
        let function = dnf.to_function()?;
        let normalized = function.with_inputs_flipped(flip);
        let mut ff = FactoredFunction { function, z, x_mask, flip, normalized, proof_sizes: Vec::new() };
        for a in 0..ff.assignments() {
            let fa = ff.restricted(a);
            if !fa.is_monotone() {
                return Err(Error::HypothesisNotMet(format!("f_a for a = {} is not monotone", ff.a_string(a))));
            }
            ff.proof_sizes.push(proof_size_max(&fa)?);
        }
        Ok(ff)
    }

    pub fn n(&self) -> usize {
        self.function.n()
    }

    pub fn k(&self) -> usize {
        self.z.len()
    }

    fn assignments(&self) -> u32 {
        1 << self.z.len()
    }

    pub fn z_mask(&self) -> u32 {
        full_mask(self.n()) & !self.x_mask
    }

    fn z_values(&self, a: u32) -> u32 {
        self.z.iter().enumerate().fold(0, |m, (i, &v)| m | (a >> i & 1) << v)
    }

    /// `a` as a bit string, `z[0]` first.
    pub fn a_string(&self, a: u32) -> String {
        (0..self.k()).map(|i| if a >> i & 1 == 1 { '1' } else { '0' }).collect()
    }

    /// The normalized `f_a` on the X variables, in increasing order.
    fn restricted(&self, a: u32) -> BooleanFunction {
        self.normalized.restrict_unchecked(self.z_mask(), self.z_values(a)).function
    }

    fn x_vars(&self) -> Vec<usize> {
        bits_of(self.x_mask).collect()
    }

    pub fn gamma(&self) -> usize {
        self.proof_sizes.iter().copied().max().unwrap_or(0)
    }

    /// G: every `a` with PROOF(f_a) = Γ.
    pub fn argmax_set(&self) -> Vec<u32> {
        let g = self.gamma();
        (0..self.assignments()).filter(|&a| self.proof_sizes[a as usize] == g).collect()
    }

    /// Minterm (or maxterm) variable sets of `f_a` as masks over the
    /// original variables, sorted.
    fn certificate_sets(&self, a: u32, side: CertificateSide) -> Result<Vec<u32>> {
        let fa = self.restricted(a);
        let vars = self.x_vars();
        let forced = match side {
            CertificateSide::Minterm => true,
            CertificateSide::Maxterm => false,
        };
        if let Some(value) = fa.constant_value() {
            return Ok(if value == forced { vec![0] } else { Vec::new() });
        }
        let certs = certificates(&fa)?;
        let sets = match side {
            CertificateSide::Minterm => certs.minterms,
            CertificateSide::Maxterm => certs.maxterms,
        };
        let mut out: Vec<u32> =
            sets.iter().map(|set| set.iter().fold(0u32, |m, lit| m | 1 << vars[lit.var])).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The first `(a, side, C)` satisfying the side condition: `a ∈ G`,
    /// `C` a certificate of `f_a` with `|C| = Γ`, and no certificate of the
    /// same side of any other `f_b` inside `var(C)`. Minterms are tried
    /// before maxterms.
    pub fn find_certificate(&self) -> Result<FactoredCertificate> {
        let gamma = self.gamma();
        for side in [CertificateSide::Minterm, CertificateSide::Maxterm] {
            let all: Vec<Vec<u32>> =
                (0..self.assignments()).map(|a| self.certificate_sets(a, side)).collect::<Result<_>>()?;
            for a in self.argmax_set() {
                for &c in &all[a as usize] {
                    if c.count_ones() as usize != gamma {
                        continue;
                    }
                    let isolated = (0..self.assignments())
                        .filter(|&b| b != a)
                        .all(|b| all[b as usize].iter().all(|&d| d & !c != 0));
                    if isolated {
                        return Ok(FactoredCertificate { a, side, vars: c });
                    }
                }
            }
        }
        Err(Error::HypothesisNotMet("no a in G has an isolated certificate of size Γ".into()))
    }

    /// Summary for reports.
    pub fn summary(&self) -> FactoredSummary {
        FactoredSummary {
            z: self.z.clone(),
            k: self.k(),
            gamma: self.gamma(),
            argmax: self.argmax_set().into_iter().map(|a| self.a_string(a)).collect(),
            proof_sizes: (0..self.assignments()).map(|a| (self.a_string(a), self.proof_sizes[a as usize])).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredSummary {
    pub z: Vec<usize>,
    pub k: usize,
    pub gamma: usize,
    pub argmax: Vec<String>,
    pub proof_sizes: Vec<(String, usize)>,
}

/// Γ and G for `dnf` with mixed variables `z`.
pub fn gamma_big(dnf: &Dnf, z: Option<&[usize]>) -> Result<(usize, Vec<u32>)> {
    let ff = FactoredFunction::new(dnf, z)?;
    Ok((ff.gamma(), ff.argmax_set()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactoredCertificate {
    pub a: u32,
    pub side: CertificateSide,
    /// Variable mask over the original variables.
    pub vars: u32,
}

impl Serialize for FactoredCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FactoredCertificate", 3)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("side", &self.side)?;
        st.serialize_field("vars", &bits_of(self.vars).map(|v| format!("x{v}")).collect::<Vec<_>>())?;
        st.end()
    }
}

/// The factored-function adversary, answering in the original frame.
///
/// Internally it works on the normalized function (minterm side) or on
/// its dual `¬f(¬x, z)` (maxterm side). X variables outside `C` are 0,
/// `C` variables are 1 and `z_i = a_i`, except for the last `Z` variable
/// and the last `C` variable the algorithm reads: if the last `Z` comes
/// first, it keeps `a_i` and the last `C` variable becomes 0; otherwise the
/// last `C` variable stays 1 and the last `Z` gets `1 - a_i`.
#[derive(Debug, Clone)]
pub struct FactoredAdversary {
    n: usize,
    z: Vec<usize>,
    a: u32,
    c: u32,
    frame_flip: u32,
    z_left: u32,
    c_left: u32,
}

pub fn factored_adversary(ff: &FactoredFunction, cert: FactoredCertificate) -> Result<(CostVector, FactoredAdversary)> {
    if cert.vars == 0 {
        return Err(Error::HypothesisNotMet("the certificate is empty".into()));
    }
    if cert.vars & !ff.x_mask != 0 {
        return Err(Error::HypothesisNotMet("the certificate uses a Z variable".into()));
    }
    let n = ff.n();
    let paid = cert.vars | ff.z_mask();
    let costs = CostVector::new((0..n).map(|v| int(i64::from(paid >> v & 1 == 1))).collect())?;
    let frame_flip = match cert.side {
        CertificateSide::Minterm => ff.flip,
        CertificateSide::Maxterm => ff.flip ^ ff.x_mask,
    };
    let adv = FactoredAdversary {
        n,
        z: ff.z.clone(),
        a: cert.a,
        c: cert.vars,
        frame_flip,
        z_left: ff.z_mask(),
        c_left: cert.vars,
    };
    Ok((costs, adv))
}

impl FactoredAdversary {
    /// The answer in the internal frame; updates the unread sets.
    fn local_answer(&mut self, var: usize) -> bool {
        let bit = 1u32 << var;
        if let Some(i) = self.z.iter().position(|&z| z == var) {
            self.z_left &= !bit;
            let a_i = self.a >> i & 1 == 1;
            // last Z read after the whole certificate: the second case
            if self.z_left == 0 && self.c_left == 0 {
                !a_i
            } else {
                a_i
            }
        } else if self.c & bit != 0 {
            self.c_left &= !bit;
            // last certificate variable: 0 if Z was finished first
            !(self.c_left == 0 && self.z_left == 0)
        } else {
            false
        }
    }
}

impl Adversary for FactoredAdversary {
    fn answer(&mut self, var: usize, _history: &[Observation]) -> bool {
        self.local_answer(var) != (self.frame_flip >> var & 1 == 1)
    }

    fn finalize(&mut self, history: &[Observation]) -> Assignment {
        let mut values = vec![false; self.n];
        let mut read = 0u32;
        for &(v, b) in history {
            values[v] = b;
            read |= 1 << v;
        }
        for (v, value) in values.iter_mut().enumerate() {
            if read >> v & 1 == 0 {
                *value = self.answer(v, history);
            }
        }
        Assignment::from_bools(&values)
    }
}

/// `s(z) = 1` on Z and `s(x) = 2^-k Σ_a s_a(x)` on X, where `s_a` is the
/// optimal LP solution of `f_a`. Feasible for the LP of `f`, with objective
/// at most `k + Γ`.
pub fn factored_feasible_solution(ff: &FactoredFunction) -> Result<LpSolution> {
    caps::check_proof(ff.n())?;
    let n = ff.n();
    let x_vars = ff.x_vars();
    let count = ff.assignments();
    let mut s = vec![Rational::zero(); n];
    for &z in &ff.z {
        s[z] = Rational::one();
    }
    let weight = Rational::new(1.into(), (count as i64).into());
    for a in 0..count {
        let fa = ff.function.restrict_unchecked(ff.z_mask(), ff.z_values(a)).function;
        let sol = solve_lp(&build_lp(&fa)?);
        for (local, &var) in x_vars.iter().enumerate() {
            s[var] += &sol.s[local] * &weight;
        }
    }
    let lp = build_lp(&ff.function)?;
    let objective = s.iter().fold(Rational::zero(), |acc, x| acc + x);
    Ok(LpSolution { s, objective, rows: lp.rows.len(), status: LpStatus::Feasible, dual: Vec::new() })
}

/// The LP the feasible solution is checked against.
pub fn factored_lp(ff: &FactoredFunction) -> Result<ProofLp> {
    build_lp(&ff.function)
}

/// Checks that every proof of `f` avoiding Z is a union of one certificate
/// per `f_a`: minterms for proofs of value 1, maxterms for value 0, in the
/// normalized frame. Returns the number of Z-free proofs checked.
pub fn z_free_proofs_decompose(ff: &FactoredFunction) -> Result<std::result::Result<usize, u32>> {
    let proofs = enumerate_proofs(&ff.normalized)?;
    let families: Vec<[Vec<u32>; 2]> = (0..ff.assignments())
        .map(|a| Ok([ff.certificate_sets(a, CertificateSide::Maxterm)?, ff.certificate_sets(a, CertificateSide::Minterm)?]))
        .collect::<Result<_>>()?;
    let mut checked = 0;
    for p in &proofs.proofs {
        if p.vars & ff.z_mask() != 0 {
            continue;
        }
        let options: Vec<Vec<u32>> =
            families.iter().map(|f| f[usize::from(p.value)].iter().copied().filter(|&c| c & !p.vars == 0).collect()).collect();
        if !covers_exactly(&options, 0, 0, p.vars) {
            return Ok(Err(p.vars));
        }
        checked += 1;
    }
    Ok(Ok(checked))
}

fn covers_exactly(options: &[Vec<u32>], i: usize, acc: u32, target: u32) -> bool {
    if i == options.len() {
        return acc == target;
    }
    options[i].iter().any(|&c| covers_exactly(options, i + 1, acc | c, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::harness::{adversarial_ratio, Greedy};
    use crate::lp::family::{make_family, FamilySpec};
    use crate::rational::Ratio;

    #[test]
    fn switching_function_analysis() {
        let dnf = generators::switching_dnf();
        let ff = FactoredFunction::new(&dnf, None).unwrap();
        assert_eq!(ff.z, vec![0]);
        assert_eq!(ff.gamma(), 2);
        assert_eq!(ff.argmax_set(), vec![0, 1]);
        let cert = ff.find_certificate().unwrap();
        let (c, mut adv) = factored_adversary(&ff, cert).unwrap();
        let f = &ff.function;
        let (report, _) = adversarial_ratio(&mut Greedy::new(&c), f, &mut adv, &c).unwrap();
        assert_eq!(report.ratio, Ratio::Finite(int(3)));
        let sol = factored_feasible_solution(&ff).unwrap();
        assert!(factored_lp(&ff).unwrap().is_feasible(&sol.s));
        assert!(sol.objective <= int(3));
        assert!(z_free_proofs_decompose(&ff).unwrap().is_ok());
    }

    #[test]
    fn family_gamma() {
        let fam = make_family(FamilySpec::new(1, 2).unwrap()).unwrap();
        let (gamma, g) = gamma_big(&fam.dnf, None).unwrap();
        assert_eq!(gamma, 2);
        assert_eq!(g, vec![0, 1]);
    }

    #[test]
    fn hypothesis_violations_name_the_variable() {
        let dnf: Dnf = "x0 & x1 | !x0 & !x1".parse().unwrap();
        let err = FactoredFunction::new(&dnf, Some(&[0])).unwrap_err();
        assert!(err.to_string().contains("x1"), "{err}");
        let pure: Dnf = "x0 & x1".parse().unwrap();
        assert!(FactoredFunction::new(&pure, None).is_err());
    }
}

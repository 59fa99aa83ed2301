//! Named function generators and random instance samplers.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dnf::{Dnf, Literal};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::lp::family::{make_family, FamilySpec};
use crate::quadratic::make_fstar;
use crate::symmetric::SymmetricProfile;

pub fn parity(n: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, |a| a.ones() % 2 == 1)
}

/// Strict majority: 1 when more than half of the inputs are 1.
pub fn majority(n: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, |a| 2 * a.ones() > n)
}

/// `(z ∨ x1) ∧ (z ∨ x2) ∧ (z̄ ∨ x3) ∧ (z̄ ∨ x4)` with `z` as variable 0.
pub fn switching_function() -> BooleanFunction {
    switching_dnf().to_function().expect("five variables")
}

/// DNF of [`switching_function`]: `z̄ x1 x2 ∨ z x3 x4`.
pub fn switching_dnf() -> Dnf {
    Dnf::new(
        5,
        vec![
            vec![Literal::neg(0), Literal::pos(1), Literal::pos(2)],
            vec![Literal::pos(0), Literal::pos(3), Literal::pos(4)],
        ],
    )
    .expect("valid")
}

/// The generator names understood by the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Fstar(usize),
    Switching,
    Family(FamilySpec),
    Parity(usize),
    Majority(usize),
    Symmetric(SymmetricProfile),
}

/// A generated instance: the function, a DNF where one is known, and
/// human-readable variable labels.
#[derive(Debug, Clone)]
pub struct Instance {
    pub function: BooleanFunction,
    pub dnf: Option<Dnf>,
    pub labels: Vec<String>,
}

impl Generator {
    pub fn build(&self) -> Result<Instance> {
        let plain = |function: BooleanFunction| {
            let labels = (0..function.n()).map(|i| format!("x{i}")).collect();
            Instance { function, dnf: None, labels }
        };
        Ok(match self {
            Generator::Fstar(s) => {
                let dnf = make_fstar(*s)?;
                let function = dnf.to_function()?;
                let labels = (0..function.n()).map(|i| format!("x{i}")).collect();
                Instance { function, dnf: Some(dnf), labels }
            }
            Generator::Switching => Instance {
                function: switching_function(),
                dnf: Some(switching_dnf()),
                labels: ["z", "x1", "x2", "x3", "x4"].iter().map(|s| s.to_string()).collect(),
            },
            Generator::Family(spec) => {
                let fam = make_family(*spec)?;
                Instance { function: fam.function, dnf: Some(fam.dnf), labels: fam.labels }
            }
            Generator::Parity(n) => plain(parity(*n)?),
            Generator::Majority(n) => plain(majority(*n)?),
            Generator::Symmetric(p) => plain(p.to_function()?),
        })
    }

    pub fn symmetric_profile(&self) -> Option<SymmetricProfile> {
        match self {
            Generator::Parity(n) => Some(SymmetricProfile::new((0..=*n).map(|k| k % 2 == 1).collect())),
            Generator::Majority(n) => Some(SymmetricProfile::new((0..=*n).map(|k| 2 * k > *n).collect())),
            Generator::Symmetric(p) => Some(p.clone()),
            _ => None,
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let number = |what: &str| -> Result<usize> {
            arg.trim()
                .parse::<usize>()
                .map_err(|_| Error::Invalid(format!("generator {name}: bad {what} {arg:?}")))
        };
        match name {
            "fstar" => Ok(Generator::Fstar(number("s")?)),
            "g" if arg.is_empty() => Ok(Generator::Switching),
            "family" => {
                let (k, t) = arg
                    .split_once(',')
                    .ok_or_else(|| Error::Invalid(format!("family expects k,t, got {arg:?}")))?;
                let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad family parameter {v:?}")));
                Ok(Generator::Family(FamilySpec::new(parse(k)?, parse(t)?)?))
            }
            "parity" => Ok(Generator::Parity(number("n")?)),
            "majority" => Ok(Generator::Majority(number("n")?)),
            "sym" => Ok(Generator::Symmetric(arg.parse()?)),
            _ => Err(Error::Invalid(format!("unknown generator {s:?}"))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Fstar(s) => write!(f, "fstar:{s}"),
            Generator::Switching => f.write_str("g"),
            Generator::Family(spec) => write!(f, "family:{},{}", spec.k, spec.t),
            Generator::Parity(n) => write!(f, "parity:{n}"),
            Generator::Majority(n) => write!(f, "majority:{n}"),
            Generator::Symmetric(p) => write!(f, "sym:{p}"),
        }
    }
}

/// Uniformly random non-constant truth table on `n` variables.
pub fn random_function<R: Rng>(n: usize, rng: &mut R) -> BooleanFunction {
    loop {
        let f = BooleanFunction::from_fn(n, |_| rng.gen_bool(0.5)).expect("small n");
        if !f.is_constant() {
            return f;
        }
    }
}

/// A random DNF with terms of one or two literals over mixed polarities,
/// resampled until the function is non-constant.
pub fn random_quadratic<R: Rng>(n: usize, rng: &mut R) -> Dnf {
    assert!(n >= 1);
    loop {
        let terms_count = rng.gen_range(1..=2 * n);
        let mut terms = Vec::with_capacity(terms_count);
        for _ in 0..terms_count {
            let first = rng.gen_range(0..n);
            let mut term = vec![Literal { var: first, negated: rng.gen_bool(0.5) }];
            if n > 1 && rng.gen_bool(0.8) {
                let mut second = rng.gen_range(0..n - 1);
                if second >= first {
                    second += 1;
                }
                term.push(Literal { var: second, negated: rng.gen_bool(0.5) });
            }
            terms.push(term);
        }
        let dnf = Dnf::new(n, terms).expect("distinct variables per term");
        if !dnf.to_function().expect("small n").is_constant() {
            return dnf;
        }
    }
}

/// A random non-constant monotone function: the up-closure of a few random
/// variable sets.
pub fn random_monotone<R: Rng>(n: usize, rng: &mut R) -> BooleanFunction {
    loop {
        let count = rng.gen_range(1..=n + 2);
        let mut masks: Vec<u32> = Vec::with_capacity(count);
        for _ in 0..count {
            let size = rng.gen_range(1..=n);
            let mut vars: Vec<usize> = (0..n).collect();
            vars.shuffle(rng);
            masks.push(vars[..size].iter().fold(0, |m, &v| m | 1 << v));
        }
        let f = BooleanFunction::from_fn(n, |a| masks.iter().any(|&m| a.bits() & m == m)).expect("small n");
        if !f.is_constant() {
            return f;
        }
    }
}

/// Every monotone function on `n ≤ 4` variables, constants included.
pub fn all_monotone(n: usize) -> Vec<BooleanFunction> {
    assert!(n <= 4, "enumerates all 2^(2^n) tables");
    let size = 1u32 << n;
    (0..1u64 << size)
        .filter_map(|table| {
            let f = BooleanFunction::from_fn(n, |a| table >> a.bits() & 1 == 1).expect("small n");
            f.is_monotone().then_some(f)
        })
        .collect()
}

//! Per-variable read costs.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::function::bits_of;
use crate::rational::{int, is_nonnegative, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostVector {
    costs: Vec<Rational>,
}

impl CostVector {
    pub fn new(costs: Vec<Rational>) -> Result<Self> {
        if let Some(i) = costs.iter().position(|c| !is_nonnegative(c)) {
            return Err(Error::Invalid(format!("cost of x{i} is negative: {}", costs[i])));
        }
        Ok(CostVector { costs })
    }

    pub fn from_ints(costs: &[i64]) -> Result<Self> {
        Self::new(costs.iter().map(|&c| int(c)).collect())
    }

    pub fn unit(n: usize) -> Self {
        CostVector { costs: vec![int(1); n] }
    }

    /// Rationals `p/q` with `p` in `[min_numer, 100]` and `q` in `[1, 10]`.
    pub fn random<R: Rng>(n: usize, rng: &mut R, min_numer: i64) -> Self {
        let costs = (0..n)
            .map(|_| {
                let p: i64 = rng.gen_range(min_numer..=100);
                let q: i64 = rng.gen_range(1..=10);
                crate::rational::frac(p, q)
            })
            .collect();
        CostVector { costs }
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn get(&self, var: usize) -> &Rational {
        &self.costs[var]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.costs
    }

    /// `c(U)` for the variable set `mask`.
    pub fn of_mask(&self, mask: u32) -> Rational {
        bits_of(mask).fold(Rational::zero(), |acc, v| acc + &self.costs[v])
    }

    pub fn total(&self) -> Rational {
        self.costs.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Variables sorted by nondecreasing cost, ties by index.
    pub fn order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.costs.len()).collect();
        order.sort_by(|&a, &b| self.costs[a].cmp(&self.costs[b]).then(a.cmp(&b)));
        order
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Self::new(self.costs.iter().map(|c| c * factor).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        CostVector { costs: perm.iter().map(|&i| self.costs[i].clone()).collect() }
    }

    /// Parses the JSON cost-file format: `{"x0": "1/2", "x1": 3, ...}`.
    pub fn from_json(text: &str, n: usize) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        let object = value
            .as_object()
            .ok_or_else(|| Error::Invalid("cost file must hold a JSON object".into()))?;
        let mut parsed = BTreeMap::new();
        for (key, v) in object {
            let var = key
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| Error::Invalid(format!("bad cost key {key:?}, expected x<i>")))?;
            if var >= n {
                return Err(Error::VariableOutOfRange { var, n });
            }
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(num) => num.to_string(),
                other => return Err(Error::Invalid(format!("bad cost for {key}: {other}"))),
            };
            parsed.insert(var, parse_rational(&text)?);
        }
        let costs = (0..n)
            .map(|i| parsed.remove(&i).ok_or_else(|| Error::Invalid(format!("no cost given for x{i}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(costs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl Serialize for CostVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.costs.len()))?;
        for (i, c) in self.costs.iter().enumerate() {
            map.serialize_entry(&format!("x{i}"), &c.to_string())?;
        }
        map.end()
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.costs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use rand::SeedableRng;

    #[test]
    fn json_round_trip() {
        let c = CostVector::new(vec![frac(1, 2), int(3), frac(5, 4)]).unwrap();
        let text = c.to_json();
        assert_eq!(text, r#"{"x0":"1/2","x1":"3","x2":"5/4"}"#);
        assert_eq!(CostVector::from_json(&text, 3).unwrap(), c);
        let mixed = CostVector::from_json(r#"{"x1": 0.25, "x0": "2"}"#, 2).unwrap();
        assert_eq!(mixed.as_slice(), &[int(2), frac(1, 4)]);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(CostVector::from_json(r#"{"x0": "1"}"#, 2).is_err());
        assert!(CostVector::from_json(r#"{"x0": "-1"}"#, 1).is_err());
        assert!(CostVector::from_json(r#"{"y0": "1"}"#, 1).is_err());
        assert!(CostVector::from_json(r#"[1]"#, 1).is_err());
    }

    #[test]
    fn random_costs_are_seeded() {
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        assert_eq!(CostVector::random(6, &mut a, 0), CostVector::random(6, &mut b, 0));
    }

    #[test]
    fn order_breaks_ties_by_index() {
        let c = CostVector::from_ints(&[3, 1, 3, 1]).unwrap();
        assert_eq!(c.order(), vec![1, 3, 0, 2]);
        assert_eq!(c.of_mask(0b0101), int(6));
    }
}

//! Function and cost sources given on the command line.

use std::path::Path;

use boolprice::generators::Generator;
use boolprice::symmetric::{extremal_cost_vector, SymmetricProfile};
use boolprice::{BooleanFunction, CostVector, Dnf, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GENERATORS: &[&str] = &["fstar", "g", "family", "parity", "majority", "sym"];

#[derive(Debug, Clone)]
pub struct Source {
    pub label: String,
    pub function: BooleanFunction,
    pub dnf: Option<Dnf>,
    pub generator: Option<Generator>,
}

impl Source {
    pub fn n(&self) -> usize {
        self.function.n()
    }

    pub fn profile(&self) -> Option<SymmetricProfile> {
        self.generator
            .as_ref()
            .and_then(Generator::symmetric_profile)
            .or_else(|| SymmetricProfile::from_function(&self.function))
    }

    pub fn require_dnf(&self) -> Result<&Dnf> {
        self.dnf
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("{} has no DNF; give the function as DNF text", self.label)))
    }
}

/// Resolves `--f`: a generator name, then a file, then inline DNF text.
pub fn load_function(text: &str) -> Result<Source> {
    let name = text.split(':').next().unwrap_or("");
    if GENERATORS.contains(&name) && !Path::new(text).exists() {
        let generator: Generator = text.parse()?;
        let instance = generator.build()?;
        return Ok(Source { label: generator.to_string(), function: instance.function, dnf: instance.dnf, generator: Some(generator) });
    }
    let path = Path::new(text);
    if path.is_file() {
        let body = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{text}: {e}")))?;
        let first = body.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
        if first.parse::<usize>().is_ok() {
            let function = BooleanFunction::parse_table_file(&body)?;
            return Ok(Source { label: text.to_string(), function, dnf: None, generator: None });
        }
        let dnf = Dnf::parse(&body)?;
        return Ok(Source { label: text.to_string(), function: dnf.to_function()?, dnf: Some(dnf), generator: None });
    }
    let dnf = Dnf::parse(text)?;
    Ok(Source { label: dnf.to_string(), function: dnf.to_function()?, dnf: Some(dnf), generator: None })
}

/// Resolves `--cost`: `unit`, `extremal`, `random`, `random:<seed>` or a
/// JSON cost file.
pub fn load_cost(text: &str, source: &Source, seed: u64) -> Result<CostVector> {
    let n = source.n();
    match text {
        "unit" => Ok(CostVector::unit(n)),
        "extremal" => {
            let profile = source
                .profile()
                .ok_or_else(|| Error::Invalid("the extremal preset needs a symmetric function".into()))?;
            extremal_cost_vector(&profile)
        }
        "random" => Ok(random_cost(n, seed)),
        _ => {
            if let Some(arg) = text.strip_prefix("random:") {
                let seed = arg.parse::<u64>().map_err(|_| Error::Invalid(format!("bad random seed {arg:?}")))?;
                return Ok(random_cost(n, seed));
            }
            let body = std::fs::read_to_string(text).map_err(|e| Error::Invalid(format!("cost source {text}: {e}")))?;
            CostVector::from_json(&body, n)
        }
    }
}

pub fn random_cost(n: usize, seed: u64) -> CostVector {
    CostVector::random(n, &mut ChaCha8Rng::seed_from_u64(seed), 0)
}

/// Comma-separated variable list such as `4` or `0,3`.
pub fn parse_vars(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|v| {
            let v = v.trim();
            v.strip_prefix('x')
                .unwrap_or(v)
                .parse::<usize>()
                .map_err(|_| Error::Invalid(format!("bad variable {v:?}")))
        })
        .collect()
}

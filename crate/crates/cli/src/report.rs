use std::io::Write;
use std::path::PathBuf;

use boolprice::Caps;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub caps: Caps,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            caps: Caps::current(),
            inputs: Map::new(),
            results: Map::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs.insert(key.to_string(), to_value(value));
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.to_string(), to_value(value));
    }

    pub fn verdict(&mut self, check: impl Into<String>, passed: bool) {
        self.verdicts.push(Verdict { check: check.into(), passed });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.inputs.iter().chain(&self.results) {
            out.push_str(&format!("{k}: {}\n", plain(v)));
        }
        for v in &self.verdicts {
            out.push_str(&format!("{} {}\n", if v.passed { "PASS" } else { "FAIL" }, v.check));
        }
        out
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Where reports go: JSON to a file (or stdout for `-`), text otherwise.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Option<PathBuf>,
}

impl Output {
    pub fn emit<T: Serialize>(&self, value: &T, text: &str) -> std::io::Result<()> {
        match &self.json {
            Some(path) => {
                let body = serde_json::to_string_pretty(value).expect("report values serialize") + "\n";
                if path.as_os_str() == "-" {
                    std::io::stdout().write_all(body.as_bytes())
                } else {
                    print!("{text}");
                    std::fs::write(path, body)
                }
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

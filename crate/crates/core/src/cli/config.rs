//! Flat `key = value` experiment files.
//!
//! ```text
//! # eq7-a at the default budget
//! problem = eq7-a
//! budget = 1000
//! hmax = sqrt
//! weights = 1, 1
//! ```
//!
//! Blank lines and `#` comments are ignored; unknown or repeated keys are
//! errors.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::analysis::SmoothnessOptions;
use crate::benchmarks::SamplingScheme;
use crate::error::{Error, Result};
use crate::scalarization::{ReferencePoint, WeightVector};
use crate::space::NormOrder;
use crate::woo::{HmaxSchedule, WooConfig};

pub const KEYS: &[&str] = &[
    "problem",
    "alphas",
    "budget",
    "arity",
    "hmax",
    "weights",
    "reference_point",
    "norm",
    "reuse_coincident",
    "reference_scheme",
    "reference_budget",
    "offset_budget",
    "analysis_depth",
    "delta_grid",
    "minimizer_budget",
    "out",
    "deterministic",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: String,
    /// Exponents of the synthetic family.
    pub alphas: Option<[f64; 2]>,
    pub woo: WooConfig,
    pub reference_scheme: SamplingScheme,
    pub reference_budget: usize,
    pub offset_budget: usize,
    pub smoothness: SmoothnessOptions,
    pub out: Option<PathBuf>,
    /// Always true; runs have no random seed.
    pub deterministic: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: "eq7-a".into(),
            alphas: None,
            woo: WooConfig::default(),
            reference_scheme: SamplingScheme::Grid,
            reference_budget: 500_000,
            offset_budget: 500_000,
            smoothness: SmoothnessOptions::default(),
            out: None,
            deterministic: true,
        }
    }
}

fn floats(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::config(format!("{key}: '{}' is not a number", s.trim())))
        })
        .collect()
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::config(format!("{key}: '{v}' is not a non-negative integer")))
}

fn flag(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::config(format!("{key}: '{v}' is not a boolean"))),
    }
}

impl ExperimentConfig {
    pub fn for_problem(problem: &str) -> Self {
        Self {
            problem: problem.to_string(),
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = HashSet::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::config(format!(
                    "line {}: unknown key '{key}'",
                    no + 1
                )));
            }
            if !seen.insert(key.to_string()) {
                return Err(Error::config(format!(
                    "line {}: key '{key}' repeated",
                    no + 1
                )));
            }
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "problem" => self.problem = v.to_string(),
            "alphas" => {
                let a = floats(key, v)?;
                let [a1, a2] = a[..] else {
                    return Err(Error::config("alphas: expected two values"));
                };
                self.alphas = Some([a1, a2]);
            }
            "budget" => self.woo.budget = count(key, v)?,
            "arity" => self.woo.arity = count(key, v)?,
            "hmax" => self.woo.hmax = HmaxSchedule::parse(v)?,
            "weights" => self.woo.weights = Some(WeightVector::new(floats(key, v)?)?),
            "reference_point" => {
                self.woo.reference_point = Some(ReferencePoint::new(floats(key, v)?)?)
            }
            "norm" => self.woo.order = NormOrder::parse(v)?,
            "reuse_coincident" => self.woo.reuse_coincident = flag(key, v)?,
            "reference_scheme" => self.reference_scheme = SamplingScheme::parse(v)?,
            "reference_budget" => self.reference_budget = count(key, v)?,
            "offset_budget" => self.offset_budget = count(key, v)?,
            "analysis_depth" => self.smoothness.max_depth = count(key, v)?,
            "delta_grid" => self.smoothness.grid_budget = count(key, v)?,
            "minimizer_budget" => self.smoothness.minimizer_budget = count(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "deterministic" => {
                if !flag(key, v)? {
                    return Err(Error::config("deterministic = false is not supported"));
                }
            }
            _ => unreachable!("key checked against KEYS"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.woo.validate()?;
        for (name, b) in [
            ("reference_budget", self.reference_budget),
            ("offset_budget", self.offset_budget),
            ("delta_grid", self.smoothness.grid_budget),
            ("minimizer_budget", self.smoothness.minimizer_budget),
        ] {
            if b == 0 {
                return Err(Error::config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_key() {
        let text = "\
# comment
problem = eq7-b
alphas = 2, 3
budget = 500
arity = 5
hmax = constant:4
weights = 1, 2
reference_point = 0, 0
norm = 2
reuse_coincident = false
reference_scheme = halton
reference_budget = 1000
offset_budget = 2000
analysis_depth = 6
delta_grid = 50
minimizer_budget = 999
out = /tmp/x
deterministic = true
";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.problem, "eq7-b");
        assert_eq!(c.alphas, Some([2.0, 3.0]));
        assert_eq!(c.woo.budget, 500);
        assert_eq!(c.woo.arity, 5);
        assert_eq!(c.woo.hmax, HmaxSchedule::Constant { h: 4 });
        assert_eq!(c.woo.weights.as_ref().unwrap().as_slice(), &[1.0, 2.0]);
        assert_eq!(c.woo.order, NormOrder::Two);
        assert!(!c.woo.reuse_coincident);
        assert_eq!(c.reference_scheme, SamplingScheme::LowDiscrepancy);
        assert_eq!(c.reference_budget, 1000);
        assert_eq!(c.offset_budget, 2000);
        assert_eq!(c.smoothness.max_depth, 6);
        assert_eq!(c.smoothness.grid_budget, 50);
        assert_eq!(c.smoothness.minimizer_budget, 999);
        assert_eq!(c.out, Some(PathBuf::from("/tmp/x")));
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "typo = 3",
            "budget = -1",
            "budget = 1\nbudget = 2",
            "no equals sign",
            "weights = 1, 0",
            "alphas = 1",
            "deterministic = false",
            "hmax = linear:0",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
        assert!(ExperimentConfig::parse("budget = 0")
            .unwrap()
            .validate()
            .is_err());
    }

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(
            ExperimentConfig::parse("\n# nothing\n").unwrap(),
            ExperimentConfig::default()
        );
    }
}

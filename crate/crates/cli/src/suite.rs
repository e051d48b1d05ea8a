//! Declarative suite files: a flat list of checks with parameter grids.
//!
//! ```toml
//! jobs = 4
//! seed = 0
//!
//! [[check]]
//! id = "lagrangian-count"
//! grid = { p = [2, 3], r = [1, 2] }
//!
//! [[check]]
//! id = "lagrangian-count"
//! grid = { p = 2, r = 2 }
//! expect = { count = 15 }
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;
use crate::params::{expand_grid, Param};
use crate::registry;
use crate::runner::Job;

/// The suite run by `torsionlab suite` without `--config`.
pub const DEFAULT_SUITE: &str = include_str!("../suites/default.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub id: String,
    #[serde(default)]
    pub grid: BTreeMap<String, GridValue>,
    /// Witness fields (dotted paths) that must take the given values.
    #[serde(default)]
    pub expect: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    One(u64),
    Many(Vec<u64>),
}

impl GridValue {
    fn values(&self) -> Vec<u64> {
        match self {
            GridValue::One(v) => vec![*v],
            GridValue::Many(v) => v.clone(),
        }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Expand every entry into concrete jobs, in declaration order.
    pub fn jobs(&self, seed_override: Option<u64>) -> Result<Vec<Job>, CliError> {
        let seed = seed_override.or(self.seed).unwrap_or(0);
        let mut out = Vec::new();
        for entry in &self.checks {
            let check = registry::find(&entry.id).map_err(|e| CliError::Config(e.to_string()))?;
            let mut given = BTreeMap::new();
            for (name, v) in &entry.grid {
                let param = Param::from_name(name)
                    .filter(|p| check.accepts(*p))
                    .ok_or_else(|| CliError::Config(format!("check `{}` has no parameter `{name}`", entry.id)))?;
                let vals = v.values();
                if vals.is_empty() {
                    return Err(CliError::Config(format!("empty grid for `{name}` in `{}`", entry.id)));
                }
                given.insert(param, vals);
            }
            let expect: BTreeMap<String, Value> = entry
                .expect
                .iter()
                .map(|(k, v)| {
                    serde_json::to_value(v)
                        .map(|j| (k.clone(), j))
                        .map_err(|e| CliError::Config(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let seed = check.seeded.then_some(seed);
            for params in expand_grid(check.params, &given, seed) {
                out.push(Job {
                    check,
                    params,
                    expect: expect.clone(),
                });
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_parses() {
        let cfg = SuiteConfig::parse(DEFAULT_SUITE).unwrap();
        assert!(!cfg.jobs(None).unwrap().is_empty());
    }

    #[test]
    fn rejects_unknown_parameters_and_checks() {
        let cfg = SuiteConfig::parse("[[check]]\nid = \"lemma-val\"\ngrid = { g = 2 }\n").unwrap();
        assert!(matches!(cfg.jobs(None), Err(CliError::Config(_))));
        let cfg = SuiteConfig::parse("[[check]]\nid = \"nope\"\n").unwrap();
        assert!(cfg.jobs(None).is_err());
        assert!(SuiteConfig::parse("bogus = 1").is_err());
    }

    #[test]
    fn empty_config_has_no_jobs() {
        assert!(SuiteConfig::parse("").unwrap().jobs(None).unwrap().is_empty());
    }
}

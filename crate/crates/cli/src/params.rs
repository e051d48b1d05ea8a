//! Check parameters and their resolution against per-check schemas.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::CliError;

/// A named numeric parameter accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    P,
    K,
    N,
    G,
    D,
    R,
    B,
}

impl Param {
    pub const ALL: [Param; 7] = [Param::P, Param::K, Param::N, Param::G, Param::D, Param::R, Param::B];

    pub fn name(self) -> &'static str {
        match self {
            Param::P => "p",
            Param::K => "k",
            Param::N => "N",
            Param::G => "g",
            Param::D => "d",
            Param::R => "r",
            Param::B => "B",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fully resolved parameters for one check invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    values: Vec<(Param, u64)>,
    pub seed: Option<u64>,
}

impl Params {
    pub fn new(values: Vec<(Param, u64)>, seed: Option<u64>) -> Self {
        Params { values, seed }
    }

    pub fn get(&self, p: Param) -> u64 {
        self.values
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("parameter {p} is not in this check's schema"))
    }

    pub fn get_u32(&self, p: Param) -> Result<u32, CliError> {
        u32::try_from(self.get(p)).map_err(|_| CliError::Usage(format!("--{p} is too large")))
    }

    pub fn get_usize(&self, p: Param) -> Result<usize, CliError> {
        usize::try_from(self.get(p)).map_err(|_| CliError::Usage(format!("--{p} is too large")))
    }

    pub fn get_i64(&self, p: Param) -> Result<i64, CliError> {
        i64::try_from(self.get(p)).map_err(|_| CliError::Usage(format!("--{p} is too large")))
    }

    /// Parameters as a JSON-friendly map (seed included when present).
    pub fn to_map(&self) -> BTreeMap<String, u64> {
        let mut m: BTreeMap<String, u64> = self.values.iter().map(|(p, v)| (p.name().to_string(), *v)).collect();
        if let Some(s) = self.seed {
            m.insert("seed".into(), s);
        }
        m
    }

    /// `p=5 k=1 N=2` in schema order.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.values.iter().map(|(p, v)| format!("{p}={v}")).collect();
        if let Some(s) = self.seed {
            parts.push(format!("seed={s}"));
        }
        parts.join(" ")
    }
}

/// Cartesian product of value lists, in schema order with the last
/// parameter varying fastest. Missing parameters take their defaults.
pub fn expand_grid(
    schema: &[(Param, u64)],
    given: &BTreeMap<Param, Vec<u64>>,
    seed: Option<u64>,
) -> Vec<Params> {
    let axes: Vec<(Param, Vec<u64>)> = schema
        .iter()
        .map(|&(p, default)| (p, given.get(&p).cloned().unwrap_or_else(|| vec![default])))
        .collect();
    let mut out = vec![Vec::new()];
    for (p, vals) in &axes {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<(Param, u64)>| {
                vals.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push((*p, v));
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Params::new(v, seed)).collect()
}

/// Parse `5` or `3,5,7`.
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("`{x}`: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_order() {
        let schema = [(Param::P, 5), (Param::G, 2)];
        let mut given = BTreeMap::new();
        given.insert(Param::P, vec![3, 5]);
        given.insert(Param::G, vec![1, 2]);
        let got: Vec<String> = expand_grid(&schema, &given, None).iter().map(Params::describe).collect();
        assert_eq!(got, ["p=3 g=1", "p=3 g=2", "p=5 g=1", "p=5 g=2"]);
        let got = expand_grid(&schema, &BTreeMap::new(), Some(4));
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].describe(), "p=5 g=2 seed=4");
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list("3, 5,7"), Ok(vec![3, 5, 7]));
        assert!(parse_list("3,x").is_err());
    }
}

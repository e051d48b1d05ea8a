//! Every check the CLI can run, with its parameter schema.

use serde_json::{json, Value};
use torsionlab_core::special_maps::{self, SpecialityReport, VerifyOptions};
use torsionlab_core::{bounds, picard, poly, symplectic, Error, Outcome, Status};

use crate::error::CliError;
use crate::params::{Param, Params};

/// Failure while running a check: either bad input or an engine error.
#[derive(Debug)]
pub enum RunError {
    Cli(CliError),
    Core(Error),
}

impl From<CliError> for RunError {
    fn from(e: CliError) -> Self {
        RunError::Cli(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

type RunFn = fn(&Params) -> Result<Outcome, RunError>;
type DumpFn = fn(&Params) -> Result<Value, RunError>;

pub struct CheckDescriptor {
    pub id: &'static str,
    pub summary: &'static str,
    /// Accepted parameters with defaults, in display order.
    pub params: &'static [(Param, u64)],
    /// Whether the check draws random spot checks from `--seed`.
    pub seeded: bool,
    pub run: RunFn,
    pub dump: Option<DumpFn>,
}

impl CheckDescriptor {
    pub fn accepts(&self, p: Param) -> bool {
        self.params.iter().any(|(q, _)| *q == p)
    }
}

fn opts(params: &Params) -> VerifyOptions {
    VerifyOptions {
        seed: params.seed.unwrap_or(0),
        ..VerifyOptions::default()
    }
}

/// A failing lemma report must carry a counterexample that re-checks.
fn speciality(r: SpecialityReport) -> Result<Outcome, RunError> {
    if r.observed == Status::Fail {
        match &r.counterexample {
            Some(ce) if ce.revalidates() => {}
            _ => {
                return Err(Error::Invariant("failing report without a revalidated counterexample".into()).into())
            }
        }
    }
    Ok(r.to_outcome())
}

/// Conjunction of several outcomes under named keys.
fn all_of(parts: Vec<(&str, Outcome)>) -> Outcome {
    let mut witness = serde_json::Map::new();
    let mut failures = serde_json::Map::new();
    for (name, o) in parts {
        if o.status == Status::Fail {
            failures.insert(name.into(), o.counterexample.clone().unwrap_or(Value::Null));
        }
        witness.insert(name.into(), json!({"status": o.status, "witness": o.witness}));
    }
    Outcome::from_check(failures.is_empty(), Value::Object(witness), || Value::Object(failures))
}

fn run_lemma_val(p: &Params) -> Result<Outcome, RunError> {
    let prime = p.get(Param::P);
    Ok(all_of(vec![
        ("valuations", poly::verify_lemma_val(prime)?),
        ("congruence", poly::verify_sr_congruence(prime)?),
        ("identities", poly::verify_sr_identities(prime, 3 * prime)?),
    ]))
}

fn run_degree_divisibility(p: &Params) -> Result<Outcome, RunError> {
    let (prime, k, n, g) = (p.get(Param::P), p.get_u32(Param::K)?, p.get_u32(Param::N)?, p.get_u32(Param::G)?);
    let kernel = special_maps::special_kernel(prime, k, n, g)?;
    let mut parts = vec![(
        "monomial".to_string(),
        poly::verify_degree_divisibility(&special_maps::PeriodicMap::monomial(prime, k, n, g)?, g)?,
    )];
    for (i, m) in kernel.maps().enumerate() {
        parts.push((format!("generator{i}"), poly::verify_degree_divisibility(m, g)?));
    }
    // n^(g+2) exercises the other direction of the equivalence
    let over = special_maps::PeriodicMap::monomial(prime, k, n, g + 2)?;
    parts.push(("monomial_g_plus_2".to_string(), poly::verify_degree_divisibility(&over, g)?));
    Ok(all_of(parts.iter().map(|(k, o)| (k.as_str(), o.clone())).collect()))
}

fn run_p2(p: &Params) -> Result<Outcome, RunError> {
    let prime = p.get(Param::P);
    let report = special_maps::verify_p2_annihilation(prime, p.get_u32(Param::K)?, p.get_u32(Param::N)?, &opts(p))?;
    let lemma = speciality(report)?;
    let v = bounds::variant_n_p_g_with_zero(prime)?;
    let variant = Outcome::from_check(v == 2, json!({"valuation": v}), || json!({"valuation": v, "expected": 2}));
    Ok(all_of(vec![("annihilation", lemma), ("vandermonde_with_zero", variant)]))
}

fn run_s6(_: &Params) -> Result<Outcome, RunError> {
    Ok(symplectic::verify_sp4_s6()?)
}

fn dump_s6(_: &Params) -> Result<Value, RunError> {
    let action = symplectic::sp4_s6_action()?;
    let forms: Vec<String> = action.odd_forms.iter().map(|q| q.describe()).collect();
    let rows: Vec<Value> = action
        .table
        .iter()
        .map(|(m, perm)| json!({"columns": m.cols(), "permutation": perm}))
        .collect();
    Ok(json!({"odd_forms": forms, "table": rows}))
}

fn dump_commutators(p: &Params) -> Result<Value, RunError> {
    let g = p.get_usize(Param::G)?;
    Ok(json!({"g": g, "instances": symplectic::relation_instances(g)}))
}

fn dump_annihilator(p: &Params) -> Result<Value, RunError> {
    let (g, b) = (p.get_u32(Param::G)?, p.get_i64(Param::B)?);
    let two = picard::DeltaSymbolModel::new(g, 2, b)?;
    let three = picard::DeltaSymbolModel::new(g, 3, b)?;
    Ok(json!({"two_primary": two.dump, "three_primary": three.dump}))
}

fn dump_chain(_: &Params) -> Result<Value, RunError> {
    Ok(json!({
        "chain": picard::m2bar_chain_relations(),
        "targets": picard::m2bar_chain_targets(),
        "models": picard::m2_models(),
    }))
}

pub static CHECKS: &[CheckDescriptor] = &[
    CheckDescriptor {
        id: "lemma-val",
        summary: "(t-1)-adic valuations of the power sums S_r, their congruence and recursions",
        params: &[(Param::P, 7)],
        seeded: false,
        run: run_lemma_val,
        dump: None,
    },
    CheckDescriptor {
        id: "ar1",
        summary: "g-special maps are the multiples of n^g",
        params: &[(Param::P, 5), (Param::K, 1), (Param::N, 2), (Param::G, 2)],
        seeded: true,
        run: |p| {
            let r = special_maps::verify_lemma_ar1(p.get(Param::P), p.get_u32(Param::K)?, p.get_u32(Param::N)?, p.get_u32(Param::G)?, &opts(p))?;
            speciality(r)
        },
        dump: None,
    },
    CheckDescriptor {
        id: "modp",
        summary: "mod p, g-special maps lie in span{n^g, n^(g-(p-1)/2)}",
        params: &[(Param::P, 5), (Param::N, 2), (Param::G, 3)],
        seeded: true,
        run: |p| {
            let r = special_maps::verify_lemma_modp(p.get(Param::P), p.get_u32(Param::N)?, p.get_u32(Param::G)?, &opts(p))?;
            speciality(r)
        },
        dump: None,
    },
    CheckDescriptor {
        id: "modp2",
        summary: "mod p^2 (N = 2), p*(phi(n) - n^g phi(1)) vanishes",
        params: &[(Param::P, 5), (Param::G, 4)],
        seeded: true,
        run: |p| speciality(special_maps::verify_lemma_modp2(p.get(Param::P), p.get_u32(Param::G)?, &opts(p))?),
        dump: None,
    },
    CheckDescriptor {
        id: "ar2",
        summary: "p annihilates phi(n) - n^g phi(1) for g-special maps",
        params: &[(Param::P, 5), (Param::K, 2), (Param::N, 2), (Param::G, 4)],
        seeded: true,
        run: |p| {
            let r = special_maps::verify_theorem_ar2(p.get(Param::P), p.get_u32(Param::K)?, p.get_u32(Param::N)?, p.get_u32(Param::G)?, &opts(p))?;
            speciality(r)
        },
        dump: None,
    },
    CheckDescriptor {
        id: "p2-annihilation",
        summary: "g = (p+1)/2: p^2 annihilates phi(n) - n^g phi(1); Vandermonde with 0 has valuation 2",
        params: &[(Param::P, 5), (Param::K, 3), (Param::N, 2)],
        seeded: true,
        run: run_p2,
        dump: None,
    },
    CheckDescriptor {
        id: "weak-prop",
        summary: "p^n(p,g) annihilates phi(n) - n^g phi(1) for weakly special maps",
        params: &[(Param::P, 5), (Param::K, 2), (Param::N, 2), (Param::G, 2)],
        seeded: true,
        run: |p| {
            let r = special_maps::verify_weak_proposition(p.get(Param::P), p.get_u32(Param::K)?, p.get_u32(Param::N)?, p.get_u32(Param::G)?, &opts(p))?;
            speciality(r)
        },
        dump: None,
    },
    CheckDescriptor {
        id: "degree-divisibility",
        summary: "degree <= g+1 iff t^(p^N) - 1 divides Q_phi (t-1)^(g+2)",
        params: &[(Param::P, 5), (Param::K, 1), (Param::N, 2), (Param::G, 2)],
        seeded: false,
        run: run_degree_divisibility,
        dump: None,
    },
    CheckDescriptor {
        id: "bound-engine",
        summary: "bound constants: d = 1 gives 4, corollary 4/12, divisibility of 4d^3 up to d, g; N(2)",
        params: &[(Param::D, 100), (Param::G, 10)],
        seeded: false,
        run: |p| Ok(bounds::verify_bound_engine(p.get(Param::D), p.get_u32(Param::G)?)?),
        dump: None,
    },
    CheckDescriptor {
        id: "theorem1",
        summary: "breakdown of the main bound for one (d, g); passes when it divides 4d^3",
        params: &[(Param::D, 1), (Param::G, 2)],
        seeded: false,
        run: |p| {
            let d = p.get(Param::D);
            let b = bounds::theorem1_exponents(d, p.get_u32(Param::G)?)?;
            let fc = bounds::faltings_chai_bound(d)?;
            let divides = b.divides(&fc);
            let w = serde_json::to_value(&b).map_err(|e| Error::Invariant(e.to_string()))?;
            Ok(Outcome::from_check(divides, w.clone(), || json!({"breakdown": w, "four_d_cubed": fc.to_string()})))
        },
        dump: None,
    },
    CheckDescriptor {
        id: "commutator-relations",
        summary: "both commutator relations between elementary matrices, for every admissible index tuple",
        params: &[(Param::G, 3)],
        seeded: false,
        run: |p| Ok(symplectic::verify_commutator_relations(p.get_usize(Param::G)?)?),
        dump: Some(dump_commutators),
    },
    CheckDescriptor {
        id: "delta-commutators",
        summary: "every generator of Delta is a product of commutators in Gamma_{1,2}",
        params: &[(Param::G, 3)],
        seeded: false,
        run: |p| Ok(symplectic::verify_delta_in_commutators(p.get_usize(Param::G)?)?),
        dump: None,
    },
    CheckDescriptor {
        id: "s6-action",
        summary: "Sp4(F2) acts faithfully on the 6 odd forms; signs of E14 and E11",
        params: &[],
        seeded: false,
        run: run_s6,
        dump: Some(dump_s6),
    },
    CheckDescriptor {
        id: "e11-fixed-form",
        summary: "E11 fixes the odd form x1y1+x2y2+x2+y2",
        params: &[],
        seeded: false,
        run: |_| Ok(symplectic::verify_e11_fixed_odd_form()?),
        dump: None,
    },
    CheckDescriptor {
        id: "lagrangian-count",
        summary: "enumerated Lagrangians of F_p^(2r) equal prod (p^i + 1)",
        params: &[(Param::P, 2), (Param::R, 2)],
        seeded: false,
        run: |p| {
            Ok(symplectic::verify_lagrangian_count(
                p.get(Param::P),
                p.get_usize(Param::R)?,
                symplectic::DEFAULT_LAGRANGIAN_LIMIT,
            )?)
        },
        dump: None,
    },
    CheckDescriptor {
        id: "covering-degree",
        summary: "the Lagrangian count is prime to p",
        params: &[(Param::P, 2), (Param::R, 2)],
        seeded: false,
        run: |p| {
            Ok(symplectic::covering_degree_prime_check(
                p.get(Param::P),
                p.get_usize(Param::R)?,
                symplectic::DEFAULT_LAGRANGIAN_LIMIT,
            )?)
        },
        dump: None,
    },
    CheckDescriptor {
        id: "interpolation",
        summary: "det pi_*L^n from the recurrence equals the closed forms for |n| <= B",
        params: &[(Param::G, 2), (Param::B, 20)],
        seeded: false,
        run: |p| Ok(picard::verify_interpolation(p.get_u32(Param::G)?, p.get(Param::B) as i128)?),
        dump: None,
    },
    CheckDescriptor {
        id: "annihilator",
        summary: "relation engine forces 2-part | 8 and 3-part | 9 on the order of Delta(L)",
        params: &[(Param::G, 2), (Param::B, 18)],
        seeded: false,
        run: |p| {
            let b = p.get_i64(Param::B)?;
            Ok(picard::verify_annihilator(p.get_u32(Param::G)?, b, b)?)
        },
        dump: Some(dump_annihilator),
    },
    CheckDescriptor {
        id: "elliptic-model",
        summary: "Delta(L_3(e)) = -omega and Delta(L_1(e)) has order 4 in Z/12",
        params: &[],
        seeded: false,
        run: |_| Ok(picard::verify_elliptic_model()?),
        dump: None,
    },
    CheckDescriptor {
        id: "elliptic-relations",
        summary: "relations between the Delta(L^n) in the Z/12 model for n <= B",
        params: &[(Param::B, 25)],
        seeded: false,
        run: |p| Ok(picard::verify_62_relations_elliptic(p.get_i64(Param::B)?)?),
        dump: None,
    },
    CheckDescriptor {
        id: "main1-elliptic",
        summary: "orders of Delta(L_d) in Z/12 and Z/4 divide the main bound at g = 1",
        params: &[],
        seeded: false,
        run: |_| Ok(picard::verify_main1_consistency_elliptic()?),
        dump: None,
    },
    CheckDescriptor {
        id: "m2bar-chain",
        summary: "genus-2 identity chain by lattice membership; Pic models of M_2",
        params: &[],
        seeded: false,
        run: |_| Ok(picard::verify_m2bar_chain()?),
        dump: Some(dump_chain),
    },
];

pub fn find(id: &str) -> Result<&'static CheckDescriptor, CliError> {
    CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| CliError::UnknownCheck(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = CHECKS.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CHECKS.len());
    }
}

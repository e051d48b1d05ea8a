//! Executing checks, optionally in parallel.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use torsionlab_core::{Error, Outcome, Status};

use crate::error::CliError;
use crate::params::Params;
use crate::registry::{CheckDescriptor, RunError};
use crate::report::VerificationReport;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub dump_relations: bool,
    pub timing: bool,
}

/// One scheduled check with optional witness expectations.
#[derive(Clone)]
pub struct Job {
    pub check: &'static CheckDescriptor,
    pub params: Params,
    pub expect: BTreeMap<String, Value>,
}

enum Classified {
    Usage(CliError),
    Skip(String),
    Broken(String),
}

fn classify(e: RunError) -> Classified {
    match e {
        RunError::Cli(c) => Classified::Usage(c),
        RunError::Core(e) => match e {
            Error::NotPrime(_)
            | Error::NotOddPrime(_)
            | Error::InvalidParameter(_)
            | Error::IndexNotAdmissible(..) => Classified::Usage(CliError::Usage(e.to_string())),
            Error::LimitExceeded { .. } | Error::Inapplicable(_) => Classified::Skip(e.to_string()),
            Error::InfiniteValuation | Error::Overflow(_) | Error::NotSymplectic | Error::Invariant(_) => {
                Classified::Broken(e.to_string())
            }
        },
    }
}

/// Look up `a.b.c` in a witness.
fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, key| cur.get(key))
}

/// Numbers in witnesses are sometimes stringified big integers.
fn same_value(actual: &Value, expected: &Value) -> bool {
    if actual == expected {
        return true;
    }
    match (actual, expected) {
        (Value::String(a), Value::Number(e)) => *a == e.to_string(),
        (Value::Number(a), Value::String(e)) => a.to_string() == *e,
        _ => false,
    }
}

fn mismatches(witness: &Value, expect: &BTreeMap<String, Value>) -> Vec<Value> {
    expect
        .iter()
        .filter_map(|(key, want)| {
            let got = lookup(witness, key);
            match got {
                Some(g) if same_value(g, want) => None,
                _ => Some(json!({"field": key, "expected": want, "actual": got})),
            }
        })
        .collect()
}

/// Run one job. Usage errors propagate; everything else becomes a report.
pub fn run_job(job: &Job, opts: RunOptions) -> Result<VerificationReport, CliError> {
    let start = Instant::now();
    let result = (job.check.run)(&job.params);
    let elapsed = start.elapsed().as_millis() as u64;
    let mut report = VerificationReport::new(job.check.id, job.params.to_map(), Status::Skipped, Value::Null);
    match result {
        Ok(outcome) => {
            let outcome = if outcome.status == Status::Fail {
                revalidate(job, outcome)?
            } else {
                outcome
            };
            report.status = outcome.status;
            report.witness = outcome.witness;
            report.counterexample = outcome.counterexample;
        }
        Err(e) => match classify(e) {
            Classified::Usage(c) => return Err(c),
            Classified::Skip(reason) => {
                report.status = Status::Skipped;
                report.witness = json!({"reason": reason});
            }
            Classified::Broken(msg) => {
                report.status = Status::Fail;
                report.witness = json!({"reason": "engine invariant violated"});
                report.counterexample = Some(json!({"error": msg}));
            }
        },
    }
    let bad = mismatches(&report.witness, &job.expect);
    if !bad.is_empty() {
        report.status = Status::Fail;
        report.counterexample = Some(json!({"expectations": bad}));
    }
    if opts.dump_relations {
        if let Some(dump) = job.check.dump {
            report.relations = match dump(&job.params) {
                Ok(v) => Some(v),
                Err(e) => match classify(e) {
                    Classified::Usage(c) => return Err(c),
                    Classified::Skip(m) | Classified::Broken(m) => Some(json!({"error": m})),
                },
            };
        }
    }
    if opts.timing {
        report.elapsed_ms = Some(elapsed);
    }
    Ok(report)
}

/// A failure is only reported if it has a counterexample and reproduces on
/// an independent re-run.
fn revalidate(job: &Job, first: Outcome) -> Result<Outcome, CliError> {
    let present = matches!(&first.counterexample, Some(v) if !v.is_null());
    let again = (job.check.run)(&job.params);
    let reproduced = matches!(&again, Ok(o) if *o == first);
    if present && reproduced {
        Ok(first)
    } else {
        Ok(Outcome::fail(
            first.witness,
            json!({
                "error": "failure could not be revalidated",
                "counterexample_present": present,
                "reproduced": reproduced,
            }),
        ))
    }
}

/// Run all jobs on `jobs` threads; results keep declaration order.
pub fn run_all(jobs: &[Job], threads: usize, opts: RunOptions) -> Result<Vec<VerificationReport>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| jobs.par_iter().map(|j| run_job(j, opts)).collect())
}

//! Randomized check registry with seeded, replayable instances.
//!
//! Each check draws instance `i` from a ChaCha8 stream seeded by
//! `sha256("{seed}:{id}:{i}")`, so a single failing instance can be replayed
//! without rerunning the rest of the suite.

pub mod generators;
mod registry;
pub mod statements;

use rand::SeedableRng;
use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use generators::Rng8;

pub use registry::{EXPONENT_TRIPLES, LCONVEX_TRIALS};

/// Failures kept verbatim per verdict.
pub const MAX_FAILURE_RECORDS: usize = 10;

/// What one instance compared, plus everything needed to rebuild it.
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub case: Value,
}

impl Outcome {
    pub fn new(lhs: f64, rhs: f64, pass: bool, case: Value) -> Self {
        Outcome { lhs, rhs, pass, case }
    }
}

pub type CheckFn = fn(&mut Rng8, f64) -> Result<Outcome>;

#[derive(Debug, Clone, Copy)]
pub struct CheckSpec {
    pub id: &'static str,
    pub group: &'static str,
    pub suite: &'static str,
    /// Key into [`statements::STATEMENTS`].
    pub statement: &'static str,
    pub tolerance: f64,
    pub default_budget: u64,
    pub run: CheckFn,
}

pub fn registry() -> &'static [CheckSpec] {
    registry::REGISTRY
}

pub fn find(id: &str) -> Option<&'static CheckSpec> {
    registry().iter().find(|c| c.id == id)
}

pub fn instance_seed(seed: u64, id: &str, index: u64) -> u64 {
    let digest = Sha256::digest(format!("{seed}:{id}:{index}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRecord {
    pub index: u64,
    pub seed: u64,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
    pub case: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub id: String,
    pub group: String,
    pub suite: String,
    pub statement: String,
    pub formula: String,
    pub tolerance: f64,
    pub instances: u64,
    pub failures: u64,
    pub pass: bool,
    /// Largest finite `lhs / rhs` seen; an empirical constant for inequalities.
    pub worst_ratio: Option<f64>,
    /// SHA-256 over the serialized cases, in instance order.
    pub inputs_digest: String,
    pub failure_records: Vec<InstanceRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub v: u32,
    pub seed: u64,
    pub budget: Option<u64>,
    pub filter: Option<String>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Glob over check ids (`*` and `?`).
    pub filter: Option<String>,
    pub group: Option<String>,
    pub suite: Option<String>,
    pub seed: u64,
    /// Instances per check; `None` uses each check's default.
    pub budget: Option<u64>,
}

fn glob_regex(glob: &str) -> Regex {
    let mut pattern = String::from("^");
    for c in glob.chars() {
        match c {
            '*' => pattern.push_str(".*"),
            '?' => pattern.push('.'),
            c => pattern.push_str(&regex::escape(&c.to_string())),
        }
    }
    pattern.push('$');
    Regex::new(&pattern).expect("escaped glob is a valid regex")
}

pub fn select(opts: &RunOptions) -> Result<Vec<&'static CheckSpec>> {
    let re = opts.filter.as_deref().filter(|f| !f.is_empty()).map(glob_regex);
    let chosen: Vec<_> = registry()
        .iter()
        .filter(|c| re.as_ref().is_none_or(|r| r.is_match(c.id)))
        .filter(|c| opts.group.as_deref().is_none_or(|g| g == c.group))
        .filter(|c| opts.suite.as_deref().is_none_or(|s| s == c.suite))
        .collect();
    if chosen.is_empty() {
        let label = [opts.filter.as_deref(), opts.group.as_deref(), opts.suite.as_deref()]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>()
            .join(" ");
        return Err(Error::UnknownFilter(label));
    }
    Ok(chosen)
}

/// Runs instance `index` of `check`.
pub fn run_instance(check: &CheckSpec, seed: u64, index: u64) -> InstanceRecord {
    let s = instance_seed(seed, check.id, index);
    let mut rng = Rng8::seed_from_u64(s);
    match (check.run)(&mut rng, check.tolerance) {
        Ok(o) => InstanceRecord {
            index,
            seed: s,
            lhs: Some(o.lhs),
            rhs: Some(o.rhs),
            pass: o.pass,
            error: None,
            case: o.case,
        },
        Err(e) => InstanceRecord {
            index,
            seed: s,
            lhs: None,
            rhs: None,
            pass: false,
            error: Some(e.to_string()),
            case: Value::Null,
        },
    }
}

fn verdict(check: &CheckSpec, seed: u64, budget: u64) -> Verdict {
    let records: Vec<InstanceRecord> = (0..budget)
        .into_par_iter()
        .map(|i| run_instance(check, seed, i))
        .collect();
    let mut hasher = Sha256::new();
    let mut worst: Option<f64> = None;
    for r in &records {
        hasher.update(serde_json::to_vec(&r.case).expect("serializable case"));
        if let (Some(l), Some(rh)) = (r.lhs, r.rhs) {
            let ratio = l / rh;
            if ratio.is_finite() {
                worst = Some(worst.map_or(ratio, |w| w.max(ratio)));
            }
        }
    }
    let failed: Vec<InstanceRecord> = records.into_iter().filter(|r| !r.pass).collect();
    let stmt = statements::lookup(check.statement).expect("registered statement");
    Verdict {
        id: check.id.into(),
        group: check.group.into(),
        suite: check.suite.into(),
        statement: stmt.key.into(),
        formula: stmt.formula.into(),
        tolerance: check.tolerance,
        instances: budget,
        failures: failed.len() as u64,
        pass: failed.is_empty(),
        worst_ratio: worst,
        inputs_digest: hex::encode(hasher.finalize()),
        failure_records: failed.into_iter().take(MAX_FAILURE_RECORDS).collect(),
    }
}

pub fn run_suite(opts: &RunOptions) -> Result<Report> {
    let mut checks = select(opts)?;
    checks.sort_by_key(|c| c.id);
    let verdicts: Vec<Verdict> = checks
        .par_iter()
        .map(|c| verdict(c, opts.seed, opts.budget.unwrap_or(c.default_budget)))
        .collect();
    Ok(Report {
        v: 1,
        seed: opts.seed,
        budget: opts.budget,
        filter: opts.filter.clone(),
        pass: verdicts.iter().all(|v| v.pass),
        verdicts,
    })
}

/// Re-runs a single instance, e.g. one listed in a failure record.
pub fn replay(id: &str, seed: u64, index: u64) -> Result<InstanceRecord> {
    let check = find(id).ok_or_else(|| Error::UnknownFilter(id.into()))?;
    Ok(run_instance(check, seed, index))
}

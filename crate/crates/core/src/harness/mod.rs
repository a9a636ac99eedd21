//! Verification harness: one suite per statement, run exhaustively or on
//! seeded samples, with replayable failure reports.

mod explain;
mod suites;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FgAbGroup;
use crate::hom::Morphism;
use crate::options::{Options, DEFAULT_HOM_BUDGET};
use crate::rickart::{decide, Property};

pub use explain::{explain, Dossier};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_SAMPLES: usize = 200;
/// Failures kept per suite; the total is always counted.
const MAX_REPORTED_FAILURES: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessConfig {
    /// Overrides each suite's default order bound.
    pub max_order: Option<u64>,
    pub hom_budget: u64,
    pub random_seed: u64,
    pub sample_count: usize,
    pub paranoid: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            max_order: None,
            hom_budget: DEFAULT_HOM_BUDGET,
            random_seed: DEFAULT_SEED,
            sample_count: DEFAULT_SAMPLES,
            paranoid: false,
        }
    }
}

impl HarnessConfig {
    pub fn options(&self) -> Options {
        Options::with_budget(self.hom_budget).paranoid(self.paranoid)
    }

    fn bound(&self, default: u64) -> u64 {
        self.max_order.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    Exhaustive,
    Sampled,
    Examples,
    Infrastructure,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteInfo {
    pub id: &'static str,
    pub statement: &'static str,
    pub kind: SuiteKind,
    /// Order bound used when the config does not set one.
    pub default_max_order: u64,
}

pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo { id: "lemma-comp", statement: "composites of fully invariant kernels (fully coinvariant cokernels) are again such", kind: SuiteKind::Exhaustive, default_max_order: 16 },
    SuiteInfo { id: "lemma-eq", statement: "a kernel is fully invariant iff its cokernel is fully coinvariant", kind: SuiteKind::Exhaustive, default_max_order: 16 },
    SuiteInfo { id: "lemma-split", statement: "strongly M-Rickart makes every epimorphism M -> N a fully coinvariant retraction; dually for monomorphisms", kind: SuiteKind::Exhaustive, default_max_order: 12 },
    SuiteInfo { id: "p1-wduo", statement: "when every summand of M embeds in N: strongly M-Rickart iff M-Rickart and M weak duo; dually", kind: SuiteKind::Exhaustive, default_max_order: 12 },
    SuiteInfo { id: "c1-wduo", statement: "strongly self-Rickart iff self-Rickart and weak duo; dually", kind: SuiteKind::Exhaustive, default_max_order: 24 },
    SuiteInfo { id: "c1-indec", statement: "for indecomposable M, strongly self-Rickart iff self-Rickart; dually", kind: SuiteKind::Exhaustive, default_max_order: 24 },
    SuiteInfo { id: "lemma-semic", statement: "the split summand of an idempotent is fully invariant iff the idempotent is semicentral on one fixed side", kind: SuiteKind::Exhaustive, default_max_order: 16 },
    SuiteInfo { id: "p1-strring", statement: "strongly self-Rickart iff self-Rickart with abelian endomorphism ring; dually", kind: SuiteKind::Exhaustive, default_max_order: 24 },
    SuiteInfo { id: "t1-epimono", statement: "strongly M-Rickart passes to quotients of M and subobjects of N; dually", kind: SuiteKind::Sampled, default_max_order: 12 },
    SuiteInfo { id: "c1-summand", statement: "strongly M-Rickart passes to summands of M and N; dually", kind: SuiteKind::Exhaustive, default_max_order: 12 },
    SuiteInfo { id: "t1-extensions", statement: "strongly M-Rickart is closed under extensions in N; dually in M", kind: SuiteKind::Sampled, default_max_order: 12 },
    SuiteInfo { id: "t1-ds", statement: "a finite direct sum is strongly M-Rickart iff each summand is; dually", kind: SuiteKind::Exhaustive, default_max_order: 12 },
    SuiteInfo { id: "c1-fg", statement: "for finitely generated M, a direct sum family is strongly M-Rickart iff each member is; dually", kind: SuiteKind::Exhaustive, default_max_order: 8 },
    SuiteInfo { id: "p1-relrickart", statement: "a strongly self-Rickart direct sum has its summands strongly Rickart relative to each other; dually", kind: SuiteKind::Exhaustive, default_max_order: 12 },
    SuiteInfo { id: "t1-sp", statement: "over a weak duo M with SSIP, products of strongly M-Rickart objects are strongly M-Rickart; dually with SSSP", kind: SuiteKind::Exhaustive, default_max_order: 12 },
    SuiteInfo { id: "t1-homzero", statement: "A + B is strongly self-Rickart iff A and B are and Hom vanishes both ways; dually", kind: SuiteKind::Exhaustive, default_max_order: 24 },
    SuiteInfo { id: "c1-abgr", statement: "closed-form classification matches the exhaustive deciders", kind: SuiteKind::Exhaustive, default_max_order: 32 },
    SuiteInfo { id: "e1-abgr", statement: "Z/p + Z/p is self-Rickart and dual self-Rickart but neither strongly", kind: SuiteKind::Examples, default_max_order: 49 },
    SuiteInfo { id: "examples", statement: "Z/4, Z, Z + Z/p and Pruefer examples", kind: SuiteKind::Examples, default_max_order: 4 },
    SuiteInfo { id: "t1-end", statement: "M strongly (dual strongly) self-Rickart iff the endomorphism ring condition holds with the cyclic or quasi-retractable side condition", kind: SuiteKind::Exhaustive, default_max_order: 16 },
    SuiteInfo { id: "snf", statement: "Smith normal form reconstruction and unimodularity", kind: SuiteKind::Infrastructure, default_max_order: 0 },
    SuiteInfo { id: "split", statement: "structural and exhaustive split tests agree", kind: SuiteKind::Infrastructure, default_max_order: 16 },
    SuiteInfo { id: "epi", statement: "closed-form epimorphism and monomorphism existence criteria match exhaustive search", kind: SuiteKind::Infrastructure, default_max_order: 16 },
];

pub fn suite_info(id: &str) -> Result<&'static SuiteInfo> {
    SUITES
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownSuite(id.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub instance: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Morphism>,
    /// A CLI invocation that reproduces the failing verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite_id: String,
    pub statement: String,
    pub passed: bool,
    pub max_order: u64,
    pub instances_checked: u64,
    /// Instances abandoned on a resource limit.
    pub skipped: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
    /// Structured findings, such as the semicentral orientation.
    pub facts: BTreeMap<String, serde_json::Value>,
    pub elapsed_ms: u64,
    pub config: HarnessConfig,
}

/// Accumulates one suite's outcome.
pub(crate) struct Run {
    pub checked: u64,
    pub skipped: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
    pub facts: BTreeMap<String, serde_json::Value>,
    skip_examples: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Run {
            checked: 0,
            skipped: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            facts: BTreeMap::new(),
            skip_examples: Vec::new(),
        }
    }

    pub fn check(&mut self) {
        self.checked += 1;
    }

    pub fn skip(&mut self, instance: impl Into<String>) {
        self.skipped += 1;
        if self.skip_examples.len() < 5 {
            self.skip_examples.push(instance.into());
        }
    }

    pub fn fail(&mut self, instance: impl Into<String>, detail: impl Into<String>) {
        self.fail_with(instance, detail, None, None);
    }

    pub fn fail_with(
        &mut self,
        instance: impl Into<String>,
        detail: impl Into<String>,
        witness: Option<Morphism>,
        replay: Option<String>,
    ) {
        self.failure_count += 1;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(Failure {
                instance: instance.into(),
                detail: detail.into(),
                witness,
                replay,
            });
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn fact(&mut self, key: &str, v: impl Serialize) {
        self.facts.insert(
            key.to_string(),
            serde_json::to_value(v).expect("facts serialize"),
        );
    }
}

/// Shared state for one harness session: options and a verdict cache, so
/// suites that revisit the same pair do not rescan it.
pub(crate) struct Ctx {
    pub cfg: HarnessConfig,
    pub opts: Options,
    cache: Mutex<HashMap<(Property, FgAbGroup, FgAbGroup), Option<bool>>>,
}

impl Ctx {
    fn new(cfg: &HarnessConfig) -> Self {
        Ctx {
            cfg: cfg.clone(),
            opts: cfg.options(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Verdict of a pair or single-group property, `None` when a resource
    /// limit stopped it.
    pub fn verdict(&self, p: Property, m: &FgAbGroup, n: &FgAbGroup) -> Result<Option<bool>> {
        let key = (p, m.clone(), n.clone());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let v = match decide(p, m, Some(n), &self.opts) {
            Ok(r) => Some(r.holds),
            Err(e) if e.is_resource_error() => None,
            Err(e) => return Err(e),
        };
        self.cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    pub fn pair(&self, p: Property, m: &FgAbGroup, n: &FgAbGroup) -> Result<Option<bool>> {
        self.verdict(p, m, n)
    }

    pub fn single(&self, p: Property, m: &FgAbGroup) -> Result<Option<bool>> {
        self.verdict(p, m, m)
    }
}

/// CLI line reproducing a pair verdict.
pub(crate) fn replay_cmd(p: Property, m: &FgAbGroup, n: Option<&FgAbGroup>) -> String {
    match n {
        Some(n) => format!("abelkit decide {p} '{m}' '{n}'"),
        None => format!("abelkit decide {p} '{m}'"),
    }
}

pub fn run_suite(id: &str, cfg: &HarnessConfig) -> Result<SuiteResult> {
    let ctx = Ctx::new(cfg);
    run_in(&ctx, id)
}

fn run_in(ctx: &Ctx, id: &str) -> Result<SuiteResult> {
    let info = suite_info(id)?;
    let max_order = ctx.cfg.bound(info.default_max_order);
    let start = Instant::now();
    let mut run = Run::new();
    suites::dispatch(ctx, id, max_order, &mut run)?;
    if run.skipped > 0 {
        let ex = run.skip_examples.join(", ");
        run.note(format!("{} instances skipped on resource limits, e.g. {ex}", run.skipped));
    }
    Ok(SuiteResult {
        suite_id: id.to_string(),
        statement: info.statement.to_string(),
        passed: run.failure_count == 0,
        max_order,
        instances_checked: run.checked,
        skipped: run.skipped,
        failure_count: run.failure_count,
        failures: run.failures,
        notes: run.notes,
        facts: run.facts,
        elapsed_ms: start.elapsed().as_millis() as u64,
        config: ctx.cfg.clone(),
    })
}

/// Every registered suite, run in parallel and reported in registry order,
/// sharing one verdict cache.
pub fn run_all(cfg: &HarnessConfig) -> Result<Vec<SuiteResult>> {
    let ctx = Ctx::new(cfg);
    SUITES.par_iter().map(|s| run_in(&ctx, s.id)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub suites: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub instances_checked: u64,
    pub skipped: u64,
    pub elapsed_ms: u64,
}

pub fn summarize(results: &[SuiteResult]) -> Summary {
    Summary {
        suites: results.len(),
        passed: results.iter().filter(|r| r.passed).count(),
        failed: results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.suite_id.clone())
            .collect(),
        instances_checked: results.iter().map(|r| r.instances_checked).sum(),
        skipped: results.iter().map(|r| r.skipped).sum(),
        elapsed_ms: results.iter().map(|r| r.elapsed_ms).sum(),
    }
}

/// Plain-text table of suite results.
pub fn render_table(results: &[SuiteResult]) -> String {
    let mut out = format!(
        "{:<15} {:<6} {:>9} {:>10} {:>8} {:>9}\n",
        "suite", "status", "max-order", "instances", "skipped", "time(ms)"
    );
    for r in results {
        out += &format!(
            "{:<15} {:<6} {:>9} {:>10} {:>8} {:>9}\n",
            r.suite_id,
            if r.passed { "pass" } else { "FAIL" },
            r.max_order,
            r.instances_checked,
            r.skipped,
            r.elapsed_ms
        );
        for f in &r.failures {
            out += &format!("    {}: {}\n", f.instance, f.detail);
        }
    }
    out
}

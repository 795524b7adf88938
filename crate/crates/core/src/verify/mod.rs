//! Seeded law verification with machine-readable reports.
//!
//! A suite is a list of named checks. Each check runs a number of instances;
//! instance `i` of check `c` draws its inputs from a generator seeded by the
//! suite seed, the check's stream name and `i`, so any instance can be
//! replayed on its own with [`replay`]. Instances run in parallel and are
//! collected in index order, so a report depends only on the configuration.

mod gen;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::LawReport;
use crate::unit::Policy;
use crate::variant::{Kernel, Merge, Threshold};

use gen::Rand;

/// Most counterexamples kept per check; the failure count is always exact.
pub const MAX_CITED_PER_CHECK: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Tnorm,
    Capacity,
    IntegralCharacterization,
    Monad,
    Morphism,
    Algebra,
    Convexity,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Tnorm,
        Suite::Capacity,
        Suite::IntegralCharacterization,
        Suite::Monad,
        Suite::Morphism,
        Suite::Algebra,
        Suite::Convexity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tnorm => "tnorm",
            Suite::Capacity => "capacity",
            Suite::IntegralCharacterization => "integral-characterization",
            Suite::Monad => "monad",
            Suite::Morphism => "morphism",
            Suite::Algebra => "algebra",
            Suite::Convexity => "convexity",
            Suite::All => "all",
        }
    }

    /// The fault each suite is expected to catch.
    pub fn default_fault(self) -> Option<Fault> {
        match self {
            Suite::Tnorm | Suite::Capacity => Some(Fault::BrokenMonotonicity),
            Suite::IntegralCharacterization | Suite::Morphism | Suite::Convexity => Some(Fault::OffByOne),
            Suite::Monad | Suite::Algebra => Some(Fault::WrongMergePolicy),
            Suite::All => None,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A deliberate single-site defect, used to show that the suites can fail.
///
/// * `BrokenMonotonicity` raises one entry of a t-norm table and one entry
///   of each generated capacity table.
/// * `WrongMergePolicy` merges colliding normal-form terms by minimum.
/// * `OffByOne` makes level sets strict (`f > t`) and drops weight 0 from
///   the hull enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    BrokenMonotonicity,
    WrongMergePolicy,
    OffByOne,
}

impl Fault {
    pub const EACH: [Fault; 3] = [Fault::BrokenMonotonicity, Fault::WrongMergePolicy, Fault::OffByOne];

    pub fn name(self) -> &'static str {
        match self {
            Fault::BrokenMonotonicity => "broken-monotonicity",
            Fault::WrongMergePolicy => "wrong-merge-policy",
            Fault::OffByOne => "off-by-one",
        }
    }

    fn kernel(fault: Option<Fault>) -> Kernel {
        let mut k = Kernel::REFERENCE;
        match fault {
            Some(Fault::WrongMergePolicy) => k.merge = Merge::Min,
            Some(Fault::OffByOne) => {
                k.threshold = Threshold::Strict;
                k.skip_zero_weight = true;
            }
            _ => {}
        }
        k
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fault::EACH
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown fault `{s}`")))
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Instance counts of the randomized checks. Exhaustive checks ignore them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sizes {
    /// Random capacities per population.
    pub capacities: usize,
    /// Random instances for law checks on nested objects.
    pub instances: usize,
    /// Random pairs for closed-form comparisons.
    pub closed_form: usize,
    /// Random triples for residuation off the grid.
    pub residuation: usize,
    /// Random nested measures for the algebra multiplication law.
    pub algebra: usize,
    /// Random subset/query cases for hulls.
    pub hull: usize,
    /// Random subsets for the quotient-construction hull comparison.
    pub quotient: usize,
    /// Random normal forms per map in the preimage law.
    pub preimage: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes {
            capacities: 2000,
            instances: 1000,
            closed_form: 10_000,
            residuation: 100_000,
            algebra: 500,
            hull: 200,
            quotient: 40,
            preimage: 200,
        }
    }
}

impl Sizes {
    const KEYS: [&'static str; 8] = [
        "capacities",
        "instances",
        "closed-form",
        "residuation",
        "algebra",
        "hull",
        "quotient",
        "preimage",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut usize> {
        Some(match key {
            "capacities" => &mut self.capacities,
            "instances" => &mut self.instances,
            "closed-form" => &mut self.closed_form,
            "residuation" => &mut self.residuation,
            "algebra" => &mut self.algebra,
            "hull" => &mut self.hull,
            "quotient" => &mut self.quotient,
            "preimage" => &mut self.preimage,
            _ => return None,
        })
    }

    /// Every size set to `n`.
    pub fn uniform(n: usize) -> Self {
        let mut s = Sizes::default();
        for key in Self::KEYS {
            *s.slot(key).expect("known key") = n;
        }
        s
    }

    /// Scales every size by `factor`, rounding up so that nonzero sizes
    /// stay nonzero.
    pub fn scaled(self, factor: f64) -> Self {
        let mut s = self;
        for key in Self::KEYS {
            let v = s.slot(key).expect("known key");
            *v = (*v as f64 * factor).ceil() as usize;
        }
        s
    }
}

impl FromStr for Sizes {
    type Err = Error;

    /// `key=value` pairs separated by commas, overriding the defaults; a
    /// bare number sets every size.
    fn from_str(text: &str) -> Result<Self> {
        if let Ok(n) = text.trim().parse::<usize>() {
            return Ok(Sizes::uniform(n));
        }
        let mut sizes = Sizes::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("expected key=value in sizes, got `{part}`")))?;
            let value = value
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("size `{key}` is not a count: `{value}`")))?;
            *sizes.slot(key.trim()).ok_or_else(|| {
                Error::Usage(format!("unknown size `{key}` (known: {})", Self::KEYS.join(", ")))
            })? = value;
        }
        Ok(sizes)
    }
}

impl fmt::Display for Sizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut copy = *self;
        for (i, key) in Self::KEYS.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{key}={}", copy.slot(key).expect("known key"))?;
        }
        Ok(())
    }
}

/// Everything a report depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub sizes: Sizes,
    /// `None`: min and Lukasiewicz exact on a grid, product in floats.
    pub policy: Option<Policy>,
    /// Grid for generated values and convex ambients. `None` uses 4 for
    /// values and 2 for ambients.
    pub grid: Option<u32>,
    /// Restricts the t-norm lanes by name (`min`, `product`,
    /// `lukasiewicz`, `table`).
    pub tnorms: Option<Vec<String>>,
    pub fault: Option<Fault>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 42,
            sizes: Sizes::default(),
            policy: None,
            grid: None,
            tnorms: None,
            fault: None,
        }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config { seed, ..Config::default() }
    }

    fn kernel(&self) -> Kernel {
        Fault::kernel(self.fault)
    }

    fn policy_label(&self) -> String {
        match self.policy {
            None => format!(
                "min, lukasiewicz: grid:{}; product: float",
                self.grid.unwrap_or(suites::VALUE_GRID)
            ),
            Some(p) => p.to_string(),
        }
    }
}

type Runner = Arc<dyn Fn(&mut Rand, usize) -> LawReport + Send + Sync>;

/// One named check: `instances` independent runs of `run`.
#[derive(Clone)]
pub(crate) struct Check {
    name: String,
    /// Generator stream; checks sharing a stream see the same inputs.
    stream: String,
    instances: usize,
    enumeration: String,
    skip: Option<String>,
    run: Runner,
}

impl Check {
    fn new(
        name: impl Into<String>,
        instances: usize,
        enumeration: impl Into<String>,
        run: impl Fn(&mut Rand, usize) -> LawReport + Send + Sync + 'static,
    ) -> Self {
        let name = name.into();
        Check {
            stream: name.clone(),
            name,
            instances,
            enumeration: enumeration.into(),
            skip: None,
            run: Arc::new(run),
        }
    }

    fn stream(mut self, stream: impl Into<String>) -> Self {
        self.stream = stream.into();
        self
    }

    fn skipped(name: impl Into<String>, enumeration: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut c = Check::new(name, 0, enumeration, |_, _| LawReport::default());
        c.skip = Some(reason.into());
        c
    }

    fn rng(&self, seed: u64, index: usize) -> Rand {
        let mut rng = Rand::seed_from_u64(seed ^ fnv1a(&self.stream));
        rng.set_stream(index as u64);
        rng
    }

    fn run_instance(&self, seed: u64, index: usize) -> LawReport {
        (self.run)(&mut self.rng(seed, index), index)
    }
}

fn fnv1a(text: &str) -> u64 {
    text.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    /// What the instances range over.
    pub enumeration: String,
    pub instances: usize,
    /// Individual law evaluations across all instances.
    pub evaluations: usize,
    /// Instances with at least one violation.
    pub failures: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
}

/// A failing instance: enough to replay it, plus both sides of the law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub instance: usize,
    pub law: String,
    pub inputs: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}#{}: {}\n    inputs: {}\n    left:   {}\n    right:  {}",
            self.check, self.instance, self.law, self.inputs, self.left, self.right
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub policy: String,
    pub sizes: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub status: Status,
    pub checks: Vec<CheckSummary>,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    /// No counterexamples. A report whose checks were all skipped also
    /// passes in this sense, but its status says `skipped`.
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Equality ignoring the elapsed time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        VerificationReport { elapsed_ms: 0, ..self.clone() } == VerificationReport { elapsed_ms: 0, ..other.clone() }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {} (seed {}, policy {})", self.suite, self.status, self.seed, self.policy)?;
        if let Some(fault) = self.fault {
            writeln!(f, "injected fault: {fault}")?;
        }
        for c in &self.checks {
            write!(f, "  {:<6} {} [{} instances, {} evaluations", c.status, c.name, c.instances, c.evaluations)?;
            if c.failures > 0 {
                write!(f, ", {} failing", c.failures)?;
            }
            write!(f, "; {}]", c.enumeration)?;
            if let Some(reason) = &c.skip_reason {
                write!(f, " skipped: {reason}")?;
            }
            writeln!(f)?;
        }
        for cx in &self.counterexamples {
            writeln!(f, "  counterexample {cx}")?;
        }
        write!(f, "{} ms", self.elapsed_ms)
    }
}

fn run_check(check: &Check, seed: u64) -> (CheckSummary, Vec<Counterexample>) {
    let results: Vec<LawReport> = (0..check.instances)
        .into_par_iter()
        .map(|i| check.run_instance(seed, i))
        .collect();
    let evaluations = results.iter().map(|r| r.checked).sum();
    let failures = results.iter().filter(|r| !r.is_clean()).count();
    let cited = results
        .into_iter()
        .enumerate()
        .flat_map(|(i, r)| {
            r.violations.into_iter().map(move |v| Counterexample {
                check: check.name.clone(),
                instance: i,
                law: v.law,
                inputs: v.inputs,
                left: v.left,
                right: v.right,
            })
        })
        .take(MAX_CITED_PER_CHECK)
        .collect();
    let status = if check.skip.is_some() || check.instances == 0 {
        Status::Skipped
    } else if failures > 0 {
        Status::Fail
    } else {
        Status::Pass
    };
    let skip_reason = check
        .skip
        .clone()
        .or_else(|| (check.instances == 0).then(|| "zero instances requested".to_string()));
    let summary = CheckSummary {
        name: check.name.clone(),
        enumeration: check.enumeration.clone(),
        instances: check.instances,
        evaluations,
        failures,
        status,
        skip_reason,
    };
    (summary, cited)
}

/// Runs `suite` under `config`.
pub fn run_suite(suite: Suite, config: &Config) -> Result<VerificationReport> {
    let start = Instant::now();
    let checks = suites::build(suite, config)?;
    let outcomes: Vec<_> = checks.par_iter().map(|c| run_check(c, config.seed)).collect();
    let mut summaries = Vec::with_capacity(outcomes.len());
    let mut counterexamples = Vec::new();
    for (summary, cited) in outcomes {
        summaries.push(summary);
        counterexamples.extend(cited);
    }
    let status = if !counterexamples.is_empty() {
        Status::Fail
    } else if summaries.iter().all(|c| c.status == Status::Skipped) {
        Status::Skipped
    } else {
        Status::Pass
    };
    Ok(VerificationReport {
        suite,
        seed: config.seed,
        policy: config.policy_label(),
        sizes: config.sizes.to_string(),
        fault: config.fault,
        status,
        checks: summaries,
        counterexamples,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Reruns one instance of a named check and returns its law report.
pub fn replay(config: &Config, check: &str, instance: usize) -> Result<LawReport> {
    let checks = suites::build(Suite::All, config)?;
    let found = checks
        .iter()
        .find(|c| c.name == check)
        .ok_or_else(|| Error::Usage(format!("no check named `{check}`")))?;
    if instance >= found.instances {
        return Err(Error::Usage(format!(
            "check `{check}` has {} instances, no instance {instance}",
            found.instances
        )));
    }
    Ok(found.run_instance(config.seed, instance))
}

/// Names of the checks `suite` would run under `config`.
pub fn check_names(suite: Suite, config: &Config) -> Result<Vec<String>> {
    Ok(suites::build(suite, config)?.into_iter().map(|c| c.name).collect())
}

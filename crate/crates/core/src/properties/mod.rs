//! Runtime property suites: every invariant the modules promise, checked on
//! seeded random inputs and reported as a pass/fail table.

mod space;
mod solvers;
mod time;

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::error::Result;
use crate::fractional_time::{l1plus_coeff, CoeffFn};

/// Inputs shared by all property checks.
#[derive(Clone)]
pub struct PropertyContext {
    /// Weight generator under test; replaced by negative controls.
    pub coeff: Arc<CoeffFn>,
    pub seed: u64,
}

impl Default for PropertyContext {
    fn default() -> Self {
        Self {
            coeff: Arc::new(l1plus_coeff),
            seed: 0x5eed_2024,
        }
    }
}

impl PropertyContext {
    pub fn with_coeff(mut self, coeff: Arc<CoeffFn>) -> Self {
        self.coeff = coeff;
        self
    }

    pub(crate) fn rng(&self, salt: u64) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Verdict of one check with a one-line explanation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub(crate) fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `value <= bound`.
    pub(crate) fn at_most(what: &str, value: f64, bound: f64) -> Self {
        Self::new(value <= bound, format!("{what} {value:.3e} (bound {bound:.1e})"))
    }
}

type CheckFn = fn(&PropertyContext) -> Result<Outcome>;

/// A named check belonging to one module suite.
#[derive(Clone, Copy)]
pub struct Property {
    pub suite: &'static str,
    pub name: &'static str,
    run: CheckFn,
}

impl Property {
    pub(crate) const fn new(suite: &'static str, name: &'static str, run: CheckFn) -> Self {
        Self { suite, name, run }
    }

    /// `filter` selects suites by substring and single checks by exact name.
    pub fn matches(&self, filter: &str) -> bool {
        self.suite.contains(filter) || self.name == filter
    }

    pub fn run(&self, ctx: &PropertyContext) -> PropertyResult {
        let start = Instant::now();
        let outcome = (self.run)(ctx).unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        PropertyResult {
            suite: self.suite,
            name: self.name,
            passed: outcome.passed,
            detail: outcome.detail,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertySummary {
    pub results: Vec<PropertyResult>,
}

impl PropertySummary {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn result(&self, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for PropertySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {}::{}: {}", r.suite, r.name, r.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} passed, {failed} failed", self.results.len(), self.results.len() - failed)
    }
}

/// Every registered check, grouped by suite.
pub fn all_properties() -> Vec<Property> {
    let mut v = time::properties();
    v.extend(space::properties());
    v.extend(solvers::properties());
    v
}

/// Suite names in registration order.
pub fn suite_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = Vec::new();
    for p in all_properties() {
        if !names.contains(&p.suite) {
            names.push(p.suite);
        }
    }
    names
}

/// Runs the checks selected by `filter` (all when `None`).
pub fn properties_suite(ctx: &PropertyContext, filter: Option<&str>) -> PropertySummary {
    let results = all_properties()
        .into_iter()
        .filter(|p| filter.is_none_or(|f| p.matches(f)))
        .map(|p| {
            let r = p.run(ctx);
            log::info!("{} {}::{} ({:.2} s)", if r.passed { "pass" } else { "FAIL" }, r.suite, r.name, r.seconds);
            r
        })
        .collect();
    PropertySummary { results }
}

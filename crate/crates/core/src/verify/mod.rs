//! Verification suites and their deterministic reports.

mod suites;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub const SCHEMA: u32 = 1;
pub const MAX_N: u32 = 5;
/// Triple-quantified checks grow as `|I(n)|^3`; past this they are impractical.
pub const MAX_TRIPLE_N: u32 = 4;
pub const MAX_Y: u32 = 6;
const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Metrics,
    Preimages,
    Separation,
    Identities,
    OpenMap,
    Quotient,
    Convergence,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Algebra,
        Suite::Metrics,
        Suite::Preimages,
        Suite::Separation,
        Suite::Identities,
        Suite::OpenMap,
        Suite::Quotient,
        Suite::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Metrics => "metrics",
            Suite::Preimages => "preimages",
            Suite::Separation => "separation",
            Suite::Identities => "identities",
            Suite::OpenMap => "openmap",
            Suite::Quotient => "quotient",
            Suite::Convergence => "convergence",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_selection(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![name.parse()?])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Instance sizes. Unset fields take per-check defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_size: Option<u32>,
}

impl Bounds {
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n {
            if n > MAX_N {
                return Err(Error::BoundExceeded { n, bound: MAX_N });
            }
        }
        if let Some(y) = self.y_size {
            if y > MAX_Y {
                return Err(Error::BoundExceeded { n: y, bound: MAX_Y });
            }
        }
        if let (Some(x), Some(y)) = (self.x_size, self.y_size) {
            if x > y {
                return Err(Error::InvalidEmbedding { x_size: x, y_size: y });
            }
        }
        Ok(())
    }

    pub fn pair_n(&self) -> u32 {
        self.n.unwrap_or(4)
    }

    pub fn triple_n(&self) -> u32 {
        self.n.unwrap_or(3).min(MAX_TRIPLE_N)
    }
}

/// One quantified statement checked over a finite family of instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// The statement being checked.
    pub anchor: String,
    pub instances: String,
    pub checked: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<serde_json::Value>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub bounds: Bounds,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn assemble(bounds: Bounds, suites: Vec<SuiteReport>) -> Self {
        let checked = suites.iter().map(|s| s.checked).sum();
        let failures = suites.iter().map(|s| s.failures).sum();
        Report {
            schema: SCHEMA,
            bounds,
            passed: failures == 0,
            checked,
            failures,
            suites,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// A plain-text summary, one line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let mark = if s.passed { "ok" } else { "FAILED" };
            out += &format!("{} [{mark}] {} checked, {} failures\n", s.suite, s.checked, s.failures);
            for c in &s.checks {
                let mark = if c.passed() { "ok" } else { "FAIL" };
                out += &format!(
                    "  {mark:4} {} ({}): {}/{}\n",
                    c.name,
                    c.instances,
                    c.checked - c.failures,
                    c.checked
                );
                for ce in &c.counterexamples {
                    out += &format!("       counterexample: {ce}\n");
                }
            }
        }
        let mark = if self.passed { "PASS" } else { "FAIL" };
        out += &format!("{mark}: {} checked, {} failures\n", self.checked, self.failures);
        out
    }
}

/// Accumulates outcomes for a single check.
pub(crate) struct Tally {
    check: Check,
}

impl Tally {
    pub fn new(name: &str, anchor: &str, instances: impl Into<String>) -> Self {
        Tally {
            check: Check {
                name: name.into(),
                anchor: anchor.into(),
                instances: instances.into(),
                checked: 0,
                failures: 0,
                counterexamples: Vec::new(),
                table: None,
            },
        }
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.check.checked += 1;
        if !ok {
            self.check.failures += 1;
            if self.check.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.check.counterexamples.push(describe());
            }
        }
    }

    /// Adds `checked` outcomes computed elsewhere, one per listed failure.
    pub fn absorb(&mut self, checked: u64, failures: impl IntoIterator<Item = String>) {
        self.check.checked += checked;
        for ce in failures {
            self.check.failures += 1;
            if self.check.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.check.counterexamples.push(ce);
            }
        }
    }

    pub fn with_table(mut self, table: serde_json::Value) -> Self {
        self.check.table = Some(table);
        self
    }

    pub fn finish(self) -> Check {
        self.check
    }
}

pub fn run_suite(suite: Suite, bounds: &Bounds) -> Result<SuiteReport> {
    bounds.validate()?;
    let checks = match suite {
        Suite::Algebra => suites::algebra(bounds)?,
        Suite::Metrics => suites::metrics(bounds)?,
        Suite::Preimages => suites::preimages(bounds)?,
        Suite::Separation => suites::separation(bounds)?,
        Suite::Identities => suites::identities(bounds)?,
        Suite::OpenMap => suites::openmap(bounds)?,
        Suite::Quotient => suites::quotient(bounds)?,
        Suite::Convergence => suites::convergence(bounds)?,
    };
    let checked = checks.iter().map(|c| c.checked).sum();
    let failures = checks.iter().map(|c| c.failures).sum();
    Ok(SuiteReport {
        suite,
        passed: failures == 0,
        checked,
        failures,
        checks,
    })
}

pub fn run(suites: &[Suite], bounds: &Bounds) -> Result<Report> {
    bounds.validate()?;
    let reports = suites
        .iter()
        .map(|&s| run_suite(s, bounds))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::assemble(*bounds, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 8);
        assert_eq!("openmap".parse::<Suite>().unwrap(), Suite::OpenMap);
        assert!(matches!("bogus".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn failures_keep_a_few_counterexamples() {
        let mut t = Tally::new("parity", "n is even", "0..10");
        for n in 0..10 {
            t.record(n % 2 == 0, || format!("n = {n}"));
        }
        let c = t.finish();
        assert_eq!((c.checked, c.failures), (10, 5));
        assert_eq!(c.counterexamples, ["n = 1", "n = 3", "n = 5", "n = 7", "n = 9"]);
        let r = Report::assemble(
            Bounds::default(),
            vec![SuiteReport {
                suite: Suite::Algebra,
                passed: false,
                checked: c.checked,
                failures: c.failures,
                checks: vec![c],
            }],
        );
        assert!(!r.passed);
        assert!(r.summary().contains("counterexample: n = 9"));
    }

    #[test]
    fn bounds_are_capped() {
        let b = Bounds {
            n: Some(6),
            ..Bounds::default()
        };
        assert!(b.validate().is_err());
        let b = Bounds {
            x_size: Some(4),
            y_size: Some(3),
            ..Bounds::default()
        };
        assert!(b.validate().is_err());
    }
}

//! Machine-readable results of the verification suites.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::genseries::{Coef, TruncSeries};

pub const SCHEMA_VERSION: u32 = 1;

/// One named check with its parameters and outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, params: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: params.into(),
            passed: true,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, params: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: params.into(),
            passed: false,
            detail: Some(detail.into()),
        }
    }

    pub fn from_bool(name: impl Into<String>, params: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let mut c = if ok {
            Self::pass(name, params)
        } else {
            Self::fail(name, params, "")
        };
        let detail = detail.into();
        if !detail.is_empty() {
            c.detail = Some(detail);
        }
        c
    }

    /// Compares two series coefficientwise and reports the first mismatch.
    pub fn series_equal<C: Coef>(name: &str, lhs: &TruncSeries<C>, rhs: &TruncSeries<C>) -> Self {
        let order = lhs.order().min(rhs.order());
        let params = format!("order={order}");
        for n in 0..=order {
            if lhs.coef(n) != rhs.coef(n) {
                let residual = lhs.coef(n).minus(rhs.coef(n));
                return Self::fail(name, params, format!("first nonzero residual at t^{n}: {residual}"));
            }
        }
        Self::pass(name, params)
    }
}

/// A suite of checks, rendered as text or JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "  [{status}] {} ({})", c.name, c.params)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

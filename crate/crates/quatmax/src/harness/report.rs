//! Machine-readable pass/fail reports.

use serde::Serialize;

/// Direction of a check: most checks bound the observed value from above;
/// non-degeneracy witnesses bound it from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Upper,
    Lower,
}

/// One named assertion with its observed value and tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    /// Check `observed <= tolerance`.
    pub fn upper(
        name: impl Into<String>,
        observed: f64,
        tolerance: f64,
        samples: usize,
        detail: Option<String>,
    ) -> Self {
        let passed = observed <= tolerance;
        Self {
            name: name.into(),
            passed,
            observed,
            tolerance,
            bound: Bound::Upper,
            samples,
            detail: if passed { None } else { detail },
        }
    }

    /// Check `observed >= tolerance` (witness lower bound).
    pub fn lower(
        name: impl Into<String>,
        observed: f64,
        tolerance: f64,
        samples: usize,
        detail: Option<String>,
    ) -> Self {
        let passed = observed >= tolerance;
        Self {
            name: name.into(),
            passed,
            observed,
            tolerance,
            bound: Bound::Lower,
            samples,
            detail: if passed { None } else { detail },
        }
    }

    pub fn render_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let rel = match self.bound {
            Bound::Upper => "<=",
            Bound::Lower => ">=",
        };
        let mut line = format!(
            "[{status}] {name} observed={observed:.3e} (want {rel} {tolerance:.3e}, {samples} samples)",
            name = self.name,
            observed = self.observed,
            tolerance = self.tolerance,
            samples = self.samples,
        );
        if let Some(d) = &self.detail {
            line.push_str(&format!(" — {d}"));
        }
        line
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComplexParts {
    pub re: f64,
    pub im: f64,
}

impl From<num_complex::Complex64> for ComplexParts {
    fn from(c: num_complex::Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

/// Full report of a verification run. Identical configuration and seed
/// reproduce the report byte for byte except for `timestamp_unix`.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub omega: ComplexParts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub timestamp_unix: u64,
}

impl SuiteReport {
    pub fn new(
        suite: impl Into<String>,
        seed: u64,
        omega: num_complex::Complex64,
        profile: Option<String>,
        checks: Vec<CheckResult>,
    ) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self {
            suite: suite.into(),
            seed,
            omega: omega.into(),
            profile,
            passed,
            checks,
            timestamp_unix: unix_now(),
        }
    }

    pub fn to_json(&self) -> crate::error::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// First failing check, if any.
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

pub(crate) fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

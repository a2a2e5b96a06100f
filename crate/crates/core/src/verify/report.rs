use std::fmt::Write as _;

use serde::Serialize;

use super::grid::GridSpec;
use crate::kernel::DegeneracyParams;

/// Where in the grid a check was evaluated. Absent fields do not apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PointLabel {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

impl PointLabel {
    pub fn at(alpha: f64, lambda: f64) -> Self {
        Self {
            alpha: Some(alpha),
            lambda: Some(lambda),
            ..Self::default()
        }
    }

    pub fn lambda(lambda: f64) -> Self {
        Self {
            lambda: Some(lambda),
            ..Self::default()
        }
    }

    pub fn with_k(self, k: usize) -> Self {
        Self { k: Some(k), ..self }
    }

    pub fn with_n(self, n: u64) -> Self {
        Self { n: Some(n), ..self }
    }
}

impl std::fmt::Display for PointLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if let Some(a) = self.alpha {
            parts.push(format!("alpha={a}"));
        }
        if let Some(l) = self.lambda {
            parts.push(format!("lambda={l}"));
        }
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        if let Some(n) = self.n {
            parts.push(format!("n={n}"));
        }
        if parts.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// One executed check. For checks that sweep an index, `expected`,
/// `actual` and `point.n` describe the worst case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub point: PointLabel,
    pub expected: f64,
    pub actual: f64,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Exact moment beside its brute-force and Monte Carlo estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub params: DegeneracyParams,
    pub order: u32,
    pub closed_form: f64,
    pub table_sum: f64,
    pub monte_carlo: f64,
    pub monte_carlo_stderr: f64,
    pub rel_discrepancy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub grid: GridSpec,
    pub checks: Vec<CheckResult>,
    pub moments: Vec<MomentReport>,
    pub passed: usize,
    pub failed: usize,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub(crate) fn new(grid: GridSpec, checks: Vec<CheckResult>, moments: Vec<MomentReport>) -> Self {
        let failed = checks.iter().filter(|c| !c.pass).count();
        Self {
            grid,
            passed: checks.len() - failed,
            failed,
            verdict: if failed == 0 { Verdict::Pass } else { Verdict::Fail },
            checks,
            moments,
        }
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Human-readable table, one line per check.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<4}  {:<36} {:<42} {:>22} {:>22} {:>10}",
            "", "check", "point", "expected", "actual", "tolerance"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<4}  {:<36} {:<42} {:>22.14e} {:>22.14e} {:>10.1e}",
                if c.pass { "ok" } else { "FAIL" },
                c.check,
                c.point.to_string(),
                c.expected,
                c.actual,
                c.tolerance
            );
        }
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed; verdict {}",
            self.checks.len(),
            self.passed,
            self.failed,
            if self.is_pass() { "PASS" } else { "FAIL" }
        );
        out
    }
}

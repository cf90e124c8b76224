//! Report-carrying validation results and the run report emitted by the CLI.

use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::lie::Vector;

/// Which law or structural invariant a validator instance checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Jacobi identity on a basis triple.
    Jacobi,
    /// Derivation law `[x,y]u = [xu,y] + [x,yu]` on (p, q, u).
    Derivation,
    /// Factor-set cocycle condition (b) on an L-basis triple.
    CocycleB,
    /// Factor-set compatibility condition (c) on (x, u, v).
    CocycleC,
    /// Table base value at the empty monomial.
    TableBase,
    /// Table degree-one value against the half-factor-set formula.
    TableDegreeOne,
    /// Table value forced to zero when the row index is the minimal factor.
    TableMinFactor,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Jacobi => "jacobi",
            Condition::Derivation => "derivation",
            Condition::CocycleB => "condition (b)",
            Condition::CocycleC => "condition (c)",
            Condition::TableBase => "table base value",
            Condition::TableDegreeOne => "table degree-1 value",
            Condition::TableMinFactor => "table minimal-factor value",
        };
        f.write_str(s)
    }
}

/// One failed check instance together with its exact residual.
#[derive(Clone, Debug)]
pub struct Violation {
    pub condition: Condition,
    /// Basis indices identifying the instance; meaning depends on the condition.
    pub indices: Vec<usize>,
    pub residual: Vector,
}

/// Outcome of an exhaustive validator pass.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    /// Number of instances evaluated.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(mut self, other: ValidationReport) -> ValidationReport {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid ({} checks)", self.checked);
        }
        writeln!(f, "{} of {} checks failed:", self.violations.len(), self.checked)?;
        for v in &self.violations {
            writeln!(f, "  {} at {:?}: residual {:?}", v.condition, v.indices, v.residual)?;
        }
        Ok(())
    }
}

/// Summary block of a [`RunReport`].
#[derive(Clone, Debug, Serialize)]
pub struct ReportSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// One reported failure, with the residual rendered against basis names.
#[derive(Clone, Debug, Serialize)]
pub struct ReportFailure {
    pub kind: String,
    pub instance: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
    pub residual: std::collections::BTreeMap<String, String>,
}

/// Machine-readable record of one CLI command run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub summary: ReportSummary,
    pub failures: Vec<ReportFailure>,
    pub timing_ms: u128,
}

impl RunReport {
    pub fn new(command: &str, input: &str, field: String) -> Self {
        RunReport {
            command: command.to_string(),
            input: input.to_string(),
            input_digest: None,
            field,
            degree: None,
            summary: ReportSummary { total: 0, passed: 0, failed: 0 },
            failures: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn record(&mut self, total: usize, failures: Vec<ReportFailure>) {
        self.summary.total += total;
        self.summary.failed += failures.len();
        self.summary.passed = self.summary.total - self.summary.failed;
        self.failures.extend(failures);
    }

    pub fn set_timing(&mut self, elapsed: Duration) {
        self.timing_ms = elapsed.as_millis();
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Renders a vector residual as a `basis name -> scalar` map.
pub fn residual_map(
    v: &Vector,
    names: &[String],
) -> std::collections::BTreeMap<String, String> {
    v.iter()
        .map(|(i, c)| (names[i].clone(), c.to_string()))
        .collect()
}

/// Renders a violation's instance indices as basis names. For Jacobi the
/// caller passes the owning algebra's names as `m_names`.
pub fn violation_instance_names(
    v: &Violation,
    m_names: &[String],
    l_names: &[String],
) -> Vec<String> {
    let m = |i: usize| m_names[i].clone();
    let l = |i: usize| l_names[i].clone();
    match v.condition {
        Condition::Jacobi => v.indices.iter().map(|&i| m(i)).collect(),
        Condition::Derivation => vec![m(v.indices[0]), m(v.indices[1]), l(v.indices[2])],
        Condition::CocycleB => v.indices.iter().map(|&i| l(i)).collect(),
        Condition::CocycleC => vec![m(v.indices[0]), l(v.indices[1]), l(v.indices[2])],
        Condition::TableBase => {
            if v.indices[0] == 0 {
                vec![l(v.indices[1])]
            } else {
                vec![m(v.indices[1])]
            }
        }
        Condition::TableDegreeOne => v.indices.iter().map(|&i| l(i)).collect(),
        Condition::TableMinFactor => v.indices.iter().map(|&i| l(i)).collect(),
    }
}

use std::collections::BTreeMap;

use serde::Serialize;

/// Inequality slack `abs + rel * max(|lhs|, |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slack {
    pub abs: f64,
    pub rel: f64,
}

impl Slack {
    pub const DEFAULT: Slack = Slack { abs: 1e-8, rel: 1e-8 };
    pub const FINITE_DIFFERENCE: Slack = Slack { abs: 1e-6, rel: 1e-6 };
    pub const MONOTONE_RATIO: Slack = Slack { abs: 0.0, rel: 1e-9 };

    pub fn allow(&self, lhs: f64, rhs: f64) -> f64 {
        self.abs + self.rel * lhs.abs().max(rhs.abs())
    }
}

impl Default for Slack {
    fn default() -> Self {
        Slack::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    HypothesisFailed { r: f64 },
    ConclusionViolated { r: f64, margin: f64 },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::HypothesisFailed { .. } => "hypothesis_failed",
            Verdict::ConclusionViolated { .. } => "conclusion_violated",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::HypothesisFailed { r } => write!(f, "hypothesis failed at r = {r}"),
            Verdict::ConclusionViolated { r, margin } => {
                write!(f, "conclusion violated at r = {r} (margin {margin:e})")
            }
            Verdict::Inconclusive { reason } => write!(f, "inconclusive: {reason}"),
        }
    }
}

/// Free-form tabular output for checks whose rows are not grid points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub check_name: String,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    /// LHS - RHS of the hypothesis; must be `>= -hypothesis_slack`.
    pub hypothesis_margin: Vec<f64>,
    /// RHS - LHS of the conclusion; expected `>= -conclusion_slack`.
    pub conclusion_margin: Vec<f64>,
    #[serde(skip)]
    pub hypothesis_slack: Vec<f64>,
    #[serde(skip)]
    pub conclusion_slack: Vec<f64>,
    pub verdict: Verdict,
    pub tolerance: Slack,
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

impl ComparisonReport {
    pub fn new(check_name: &str, tolerance: Slack) -> Self {
        ComparisonReport {
            check_name: check_name.to_string(),
            r: Vec::new(),
            s: Vec::new(),
            hypothesis_margin: Vec::new(),
            conclusion_margin: Vec::new(),
            hypothesis_slack: Vec::new(),
            conclusion_slack: Vec::new(),
            verdict: Verdict::Pass,
            tolerance,
            diagnostics: BTreeMap::new(),
            table: None,
        }
    }

    pub fn push(&mut self, r: f64, s: f64, hyp: (f64, f64), concl: (f64, f64)) {
        self.r.push(r);
        self.s.push(s);
        self.hypothesis_margin.push(hyp.0);
        self.hypothesis_slack.push(hyp.1);
        self.conclusion_margin.push(concl.0);
        self.conclusion_slack.push(concl.1);
    }

    pub fn diag(&mut self, key: &str, value: f64) {
        self.diagnostics.insert(key.to_string(), value);
    }

    /// First grid point where the hypothesis fails, if any.
    pub fn first_hypothesis_failure(&self) -> Option<usize> {
        self.hypothesis_margin
            .iter()
            .zip(&self.hypothesis_slack)
            .position(|(m, t)| !(*m >= -t))
    }

    /// Sets the verdict from the margins. The conclusion is judged only when
    /// the hypothesis holds at every grid point.
    pub fn judge(&mut self) {
        if let Some(i) = self.first_hypothesis_failure() {
            self.verdict = Verdict::HypothesisFailed { r: self.r[i] };
            return;
        }
        for i in 0..self.r.len() {
            let m = self.conclusion_margin[i];
            if m.is_nan() {
                self.verdict = Verdict::Inconclusive {
                    reason: format!("conclusion not computable at r = {}", self.r[i]),
                };
                return;
            }
            if m < -self.conclusion_slack[i] {
                self.verdict = Verdict::ConclusionViolated { r: self.r[i], margin: m };
                return;
            }
        }
        self.verdict = Verdict::Pass;
    }

    /// `(index, value)` of the smallest finite entry.
    pub fn min_of(values: &[f64]) -> Option<(usize, f64)> {
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_nan())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, v)| (i, *v))
    }

    pub fn min_hypothesis(&self) -> Option<(f64, f64)> {
        Self::min_of(&self.hypothesis_margin).map(|(i, v)| (self.r[i], v))
    }

    pub fn min_conclusion(&self) -> Option<(f64, f64)> {
        Self::min_of(&self.conclusion_margin).map(|(i, v)| (self.r[i], v))
    }

    /// Largest `|conclusion margin|` relative to its slack; at most 1 means
    /// equality within tolerance.
    pub fn max_conclusion_ratio(&self) -> f64 {
        self.conclusion_margin
            .iter()
            .zip(&self.conclusion_slack)
            .map(|(m, t)| m.abs() / t)
            .fold(0.0, f64::max)
    }
}

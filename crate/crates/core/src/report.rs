use serde::{Deserialize, Serialize};

/// Outcome of evaluating one inequality.
///
/// `slack` is oriented so that `slack ≥ 0` means the inequality holds, and
/// `holds` is exactly `slack ≥ −tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    #[serde(rename = "inequality")]
    pub inequality_name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub holds: bool,
}

/// Relative tolerance for inequality verdicts: `tol = 1e-9 · (1 + |lhs|)`.
pub const VERDICT_RTOL: f64 = 1e-9;

impl SlackReport {
    /// Report for `lhs ≤ rhs` (slack `rhs − lhs`).
    pub fn upper_bound(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::with_slack(name, lhs, rhs, rhs - lhs)
    }

    /// Report for `lhs ≥ rhs` (slack `lhs − rhs`).
    pub fn lower_bound(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::with_slack(name, lhs, rhs, lhs - rhs)
    }

    fn with_slack(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        let tol = VERDICT_RTOL * (1.0 + lhs.abs());
        SlackReport {
            inequality_name: name.into(),
            lhs,
            rhs,
            slack,
            tol,
            holds: slack >= -tol,
        }
    }

    /// Replaces the tolerance and recomputes the verdict.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.holds = self.slack >= -tol;
        self
    }
}

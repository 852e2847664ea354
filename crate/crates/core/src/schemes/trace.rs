use serde::{Deserialize, Serialize};

use crate::geometry::SpacePoint;

/// Which steps a trace keeps. The last step is always kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TraceStride {
    /// Every step up to 1000, then every `10^(floor(log10 k) - 2)`-th.
    #[default]
    Logarithmic,
    Every { n: usize },
}

impl TraceStride {
    #[allow(clippy::manual_is_multiple_of)]
    pub fn keeps(&self, k: usize) -> bool {
        match *self {
            TraceStride::Every { n } => n <= 1 || k % n == 0 || k == 1,
            TraceStride::Logarithmic => {
                if k <= 1000 {
                    return true;
                }
                let mut step = 1usize;
                let mut m = k / 1000;
                while m >= 10 {
                    m /= 10;
                    step *= 10;
                }
                k % (step * 10) == 0
            }
        }
    }
}

/// One recorded iteration: `x_k` with `r_k = d(x_k, T_k x_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub k: usize,
    pub point: SpacePoint,
    pub residual: f64,
    pub dist_to_reference: Option<f64>,
    /// `d(x_k, p) - d(x_{k+1}, p)` for the sequence's witness `p`.
    pub fejer_gap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    BudgetExhausted,
    SolverError { step: usize, message: String },
}

impl StopReason {
    pub fn label(&self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::BudgetExhausted => "budget_exhausted",
            StopReason::SolverError { .. } => "solver_error",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    /// Operator applications performed.
    pub iterations_run: usize,
    /// The last residual measured.
    pub final_residual: f64,
    /// The last iterate computed.
    pub final_point: SpacePoint,
    pub stop_reason: StopReason,
    /// `d(final_point, reference)` when a reference is configured.
    pub target_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    pub steps: Vec<TraceStep>,
    pub summary: RunSummary,
}

impl IterationTrace {
    pub fn points(&self) -> impl Iterator<Item = &SpacePoint> {
        self.steps.iter().map(|s| &s.point)
    }
}

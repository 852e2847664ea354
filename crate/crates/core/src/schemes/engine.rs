use super::trace::{IterationTrace, RunSummary, StopReason, TraceStep, TraceStride};
use super::{Schedule, ScheduleClass, ScheduleRule};
use crate::error::{Error, Result};
use crate::geometry::SpacePoint;
use crate::operators::OperatorSequence;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_BUDGET: usize = 100_000;

/// Inputs of one run. Iterations are indexed from `k = 1` with
/// `x_1 = start`; a recursion written from `x_0` is shifted by one.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub start: SpacePoint,
    /// Halpern anchor `u`; must be absent for plain sequence iteration.
    pub anchor: Option<SpacePoint>,
    /// Halpern weights `α_k`; defaults to `1/(k+1)`.
    pub anchor_weights: Option<Schedule>,
    /// Point whose distance to each iterate is tracked.
    pub reference: Option<SpacePoint>,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub stride: TraceStride,
}

impl RunConfig {
    pub fn new(start: SpacePoint) -> Self {
        RunConfig {
            start,
            anchor: None,
            anchor_weights: None,
            reference: None,
            max_iterations: DEFAULT_BUDGET,
            tolerance: DEFAULT_TOLERANCE,
            stride: TraceStride::default(),
        }
    }

    pub fn with_anchor(mut self, u: SpacePoint) -> Self {
        self.anchor = Some(u);
        self
    }

    pub fn with_anchor_weights(mut self, w: Schedule) -> Self {
        self.anchor_weights = Some(w);
        self
    }

    pub fn with_reference(mut self, p: SpacePoint) -> Self {
        self.reference = Some(p);
        self
    }

    pub fn with_budget(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_stride(mut self, stride: TraceStride) -> Self {
        self.stride = stride;
        self
    }

    fn validate(&self, seq: &OperatorSequence) -> Result<()> {
        let space = seq.space();
        let pts = [Some(&self.start), self.anchor.as_ref(), self.reference.as_ref()];
        for p in pts.into_iter().flatten() {
            if p.space() != space {
                return Err(Error::config(format!(
                    "point in {:?} given to a run on {space:?}",
                    p.space()
                )));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations must be at least 1"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::config(format!("tolerance must be non-negative, got {}", self.tolerance)));
        }
        if let TraceStride::Every { n: 0 } = self.stride {
            return Err(Error::config("trace stride must be positive"));
        }
        Ok(())
    }
}

/// The default Halpern weights `α_k = 1/(k+1)`.
pub fn harmonic_anchor_weights() -> Schedule {
    Schedule::new(ScheduleRule::harmonic(), ScheduleClass::HalpernAnchor).expect("1/(k+1) is a Halpern schedule")
}

struct Recorder<'a> {
    seq: &'a OperatorSequence,
    cfg: &'a RunConfig,
    steps: Vec<TraceStep>,
}

impl Recorder<'_> {
    fn record(&mut self, k: usize, x: &SpacePoint, next: Option<&SpacePoint>, residual: f64, last: bool) -> Result<()> {
        if !(last || self.cfg.stride.keeps(k)) {
            return Ok(());
        }
        let space = self.seq.space();
        let dist_to_reference = match &self.cfg.reference {
            Some(r) => Some(space.distance(x, r)?),
            None => None,
        };
        let fejer_gap = match (self.seq.witness(), next) {
            (Some(p), Some(n)) => Some(space.distance(x, p)? - space.distance(n, p)?),
            _ => None,
        };
        self.steps.push(TraceStep {
            k,
            point: x.clone(),
            residual,
            dist_to_reference,
            fejer_gap,
        });
        Ok(())
    }

    fn finish(
        self,
        iterations_run: usize,
        final_residual: f64,
        final_point: SpacePoint,
        stop_reason: StopReason,
    ) -> Result<IterationTrace> {
        let target_distance = match &self.cfg.reference {
            Some(r) => Some(self.seq.space().distance(&final_point, r)?),
            None => None,
        };
        Ok(IterationTrace {
            steps: self.steps,
            summary: RunSummary {
                iterations_run,
                final_residual,
                final_point,
                stop_reason,
                target_distance,
            },
        })
    }
}

/// `x_{k+1} = T_k x_k` until `d(x_k, T_k x_k) <= tol` or the budget runs out.
pub fn iterate_sequence(seq: &OperatorSequence, cfg: &RunConfig) -> Result<IterationTrace> {
    cfg.validate(seq)?;
    if cfg.anchor.is_some() {
        return Err(Error::config("an anchor is only meaningful for Halpern schemes"));
    }
    let space = seq.space();
    let mut rec = Recorder { seq, cfg, steps: Vec::new() };
    let mut x = cfg.start.clone();
    let mut residual = f64::NAN;
    for k in 1..=cfg.max_iterations {
        let step = seq.operator(k).and_then(|t| {
            let y = t.apply(&x)?;
            let r = space.distance(&x, &y)?;
            Ok((y, r))
        });
        let (y, r) = match step {
            Ok(v) => v,
            Err(e) => {
                rec.record(k, &x, None, f64::NAN, true)?;
                let reason = StopReason::SolverError {
                    step: k,
                    message: e.to_string(),
                };
                return rec.finish(k - 1, residual, x, reason);
            }
        };
        residual = r;
        let done = r <= cfg.tolerance;
        rec.record(k, &x, Some(&y), r, done || k == cfg.max_iterations)?;
        x = y;
        if done {
            return rec.finish(k, residual, x, StopReason::Converged);
        }
    }
    rec.finish(cfg.max_iterations, residual, x, StopReason::BudgetExhausted)
}

/// `x_{k+1} = α_k u ⊕ (1-α_k) T_k x_k` until `d(x_k, x_{k+1}) <= tol` or the
/// budget runs out. The recorded residual is still `d(x_k, T_k x_k)`.
pub fn halpern_iterate(seq: &OperatorSequence, cfg: &RunConfig) -> Result<IterationTrace> {
    cfg.validate(seq)?;
    let Some(u) = cfg.anchor.clone() else {
        return Err(Error::config("Halpern iteration needs an anchor point u"));
    };
    let weights = cfg.anchor_weights.clone().unwrap_or_else(harmonic_anchor_weights);
    if *weights.class() != ScheduleClass::HalpernAnchor {
        return Err(Error::config(
            "Halpern weights must be declared with lim alpha_k = 0 and sum alpha_k = +inf",
        ));
    }
    let space = seq.space();
    let mut rec = Recorder { seq, cfg, steps: Vec::new() };
    let mut x = cfg.start.clone();
    let mut residual = f64::NAN;
    for k in 1..=cfg.max_iterations {
        let step = seq.operator(k).and_then(|t| {
            let tx = t.apply(&x)?;
            let r = space.distance(&x, &tx)?;
            let next = space.combine(&u, &tx, 1.0 - weights.value(k))?;
            let moved = space.distance(&x, &next)?;
            Ok((next, r, moved))
        });
        let (next, r, moved) = match step {
            Ok(v) => v,
            Err(e) => {
                rec.record(k, &x, None, f64::NAN, true)?;
                let reason = StopReason::SolverError {
                    step: k,
                    message: e.to_string(),
                };
                return rec.finish(k - 1, residual, x, reason);
            }
        };
        residual = r;
        let done = moved <= cfg.tolerance;
        rec.record(k, &x, Some(&next), r, done || k == cfg.max_iterations)?;
        x = next;
        if done {
            return rec.finish(k, residual, x, StopReason::Converged);
        }
    }
    rec.finish(cfg.max_iterations, residual, x, StopReason::BudgetExhausted)
}

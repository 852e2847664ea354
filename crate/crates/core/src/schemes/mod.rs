//! Parameter schedules, the sequence and Halpern iteration engines, and the
//! named schemes built on them.

mod build;
mod engine;
pub mod schedule;
mod trace;

pub use build::{build_scheme, Engine, Scheme, SchemeName, SchemeSchedules, DEFAULT_EQUILIBRIUM_MARGIN};
pub use engine::{
    halpern_iterate, harmonic_anchor_weights, iterate_sequence, RunConfig, DEFAULT_BUDGET, DEFAULT_TOLERANCE,
};
pub use schedule::{CustomRule, Schedule, ScheduleClass, ScheduleRule, SPOT_CHECK_INDICES};
pub use trace::{IterationTrace, RunSummary, StopReason, TraceStep, TraceStride};

use crate::error::Result;

impl Scheme {
    /// Runs the scheme's engine. The config's anchor weights are replaced
    /// by the validated ones for Halpern schemes.
    pub fn run(&self, cfg: &RunConfig) -> Result<IterationTrace> {
        match self.engine {
            Engine::Sequence => iterate_sequence(&self.sequence, cfg),
            Engine::Halpern => {
                let mut cfg = cfg.clone();
                cfg.anchor_weights = self.anchor_weights.clone();
                halpern_iterate(&self.sequence, &cfg)
            }
        }
    }
}

use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{summarize, to_json, trace_csv, write_atomic, Summary};
use crate::Overrides;

/// Trace CSV bytes and summary of one experiment.
#[derive(Clone, Debug)]
pub struct Executed {
    pub csv: Vec<u8>,
    pub summary: Summary,
}

/// Validates and runs `cfg` without touching the filesystem.
pub fn execute(cfg: &ExperimentConfig) -> Result<Executed, CliError> {
    let prepared = cfg.prepare()?;
    let trace = prepared.scheme.run(&prepared.run)?;
    let csv = trace_csv(prepared.space, &trace).map_err(|e| CliError::config(format!("trace encoding: {e}")))?;
    let summary = summarize(
        cfg.scheme,
        prepared.scheme.sequence.label(),
        cfg.seed,
        prepared.run.reference.as_ref(),
        &trace,
    );
    Ok(Executed { csv, summary })
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub summary: Summary,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code()
    }
}

pub fn apply_overrides(cfg: &mut ExperimentConfig, ov: &Overrides) {
    if let Some(seed) = ov.seed {
        cfg.seed = seed;
    }
    if let Some(n) = ov.max_iters {
        cfg.max_iterations = n;
    }
}

/// Runs one experiment and writes its trace and summary under `dir`.
pub fn run_into(cfg: &ExperimentConfig, dir: &Path) -> Result<RunOutcome, CliError> {
    let done = execute(cfg)?;
    let trace_path = dir.join(&cfg.output.trace);
    let summary_path = dir.join(&cfg.output.summary);
    write_atomic(&trace_path, &done.csv)?;
    write_atomic(&summary_path, &to_json(&done.summary))?;
    Ok(RunOutcome {
        summary: done.summary,
        trace_path,
        summary_path,
    })
}

pub fn cmd_run(config: &Path, ov: &Overrides) -> Result<RunOutcome, CliError> {
    let mut cfg = ExperimentConfig::load(config)?;
    apply_overrides(&mut cfg, ov);
    run_into(&cfg, &ov.out)
}

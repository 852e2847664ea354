//! Experiment configuration: one JSON document per run.

use std::path::Path;

use hadamard_core::operators::catalog_operator;
use hadamard_core::resolvents::{bifunction_fixture, objective_fixture, BifunctionDescriptor, FunctionDescriptor, ResolventSource};
use hadamard_core::schemes::{build_scheme, RunConfig, Scheme, SchemeName, SchemeSchedules, TraceStride, DEFAULT_BUDGET, DEFAULT_TOLERANCE};
use hadamard_core::{ModelSpace, OperatorDescriptor, PointSpec, SpacePoint};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default = "default_trace")]
    pub trace: String,
    #[serde(default = "default_summary")]
    pub summary: String,
}

fn default_trace() -> String {
    "trace.csv".into()
}

fn default_summary() -> String {
    "summary.json".into()
}

impl Default for OutputPaths {
    fn default() -> Self {
        OutputPaths {
            trace: default_trace(),
            summary: default_summary(),
        }
    }
}

/// A single run. Exactly one of `operator`, `function`, `bifunction` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub space: ModelSpace,
    pub scheme: SchemeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bifunction: Option<BifunctionDescriptor>,
    #[serde(default)]
    pub schedules: SchemeSchedules,
    pub start: PointSpec,
    /// Halpern anchor `u`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<PointSpec>,
    /// Point tracked by `dist_to_reference`; derived from the fixture when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<PointSpec>,
    #[serde(default = "default_budget")]
    pub max_iterations: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub stride: TraceStride,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// A validated experiment ready to run.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub scheme: Scheme,
    pub run: RunConfig,
    pub space: ModelSpace,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    pub fn source(&self) -> Result<ResolventSource, CliError> {
        let s = self.space;
        match (&self.operator, &self.function, &self.bifunction) {
            (Some(op), None, None) => Ok(ResolventSource::Operator(catalog_operator(s, op)?)),
            (None, Some(f), None) => Ok(ResolventSource::Function(objective_fixture(s, f)?)),
            (None, None, Some(b)) => Ok(ResolventSource::Bifunction(bifunction_fixture(s, b)?)),
            _ => Err(CliError::config(
                "exactly one of operator, function, bifunction must be given",
            )),
        }
    }

    /// Builds the scheme, which validates every schedule, then the run inputs.
    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let scheme = build_scheme(self.scheme, &self.source()?, &self.schedules)?;
        let s = self.space;
        let start = self.start.resolve(s)?;
        let anchor = self.anchor.as_ref().map(|u| u.resolve(s)).transpose()?;
        let reference = match &self.reference {
            Some(p) => Some(p.resolve(s)?),
            None => derived_reference(&scheme, anchor.as_ref())?,
        };
        let mut run = RunConfig::new(start)
            .with_budget(self.max_iterations)
            .with_tolerance(self.tolerance)
            .with_stride(self.stride);
        if let Some(u) = anchor {
            run = run.with_anchor(u);
        }
        if let Some(p) = reference {
            run = run.with_reference(p);
        }
        Ok(Prepared { scheme, run, space: s })
    }
}

/// `Proj_F u` for Halpern schemes; the unique fixed point otherwise.
fn derived_reference(scheme: &Scheme, anchor: Option<&SpacePoint>) -> Result<Option<SpacePoint>, CliError> {
    let seq = &scheme.sequence;
    let Some(set) = seq.fixed_set() else {
        return Ok(None);
    };
    Ok(match anchor {
        Some(u) => Some(set.project(seq.space(), u)?),
        None => set.as_singleton().cloned(),
    })
}

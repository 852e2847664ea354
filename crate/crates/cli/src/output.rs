//! Trace CSV, run summaries and atomic file writes.

use std::io::Write;
use std::path::Path;

use hadamard_core::geometry::Coords;
use hadamard_core::schemes::{IterationTrace, SchemeName, StopReason};
use hadamard_core::{ModelSpace, SpacePoint};
use serde::Serialize;

use crate::error::CliError;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn coordinate_names(space: ModelSpace) -> Vec<String> {
    match space {
        ModelSpace::Euclidean { dim } => (0..dim).map(|i| format!("x{i}")).collect(),
        ModelSpace::Hyperboloid { dim } => (0..=dim).map(|i| format!("x{i}")).collect(),
        ModelSpace::Spider { .. } => vec!["leg".into(), "radius".into()],
    }
}

fn coordinates(p: &SpacePoint) -> Vec<String> {
    match p.coords() {
        Coords::Vector(v) => v.iter().map(|c| fmt_f64(*c)).collect(),
        Coords::Tree { leg, radius } => vec![leg.to_string(), fmt_f64(*radius)],
    }
}

/// Columns `k, coords..., residual, dist_to_reference, fejer_gap`.
pub fn trace_csv(space: ModelSpace, trace: &IterationTrace) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["k".to_string()];
    header.extend(coordinate_names(space));
    header.extend(["residual", "dist_to_reference", "fejer_gap"].map(String::from));
    w.write_record(&header)?;
    for s in &trace.steps {
        let mut row = vec![s.k.to_string()];
        row.extend(coordinates(&s.point));
        row.push(fmt_f64(s.residual));
        row.push(fmt_opt(s.dist_to_reference));
        row.push(fmt_opt(s.fejer_gap));
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub scheme: SchemeName,
    pub statement: &'static str,
    pub space: ModelSpace,
    pub sequence: String,
    pub seed: u64,
    pub iterations: usize,
    pub stop_reason: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_error_step: Option<usize>,
    pub final_residual: f64,
    pub final_point: Vec<f64>,
    pub target_distance: Option<f64>,
    pub reference: Option<Vec<f64>>,
    pub trace_rows: usize,
}

impl Summary {
    pub fn exit_code(&self) -> i32 {
        match self.stop_reason {
            "converged" => crate::EXIT_OK,
            "budget_exhausted" => crate::EXIT_BUDGET,
            _ => crate::EXIT_SOLVER,
        }
    }
}

pub fn summarize(
    scheme: SchemeName,
    sequence: &str,
    seed: u64,
    reference: Option<&SpacePoint>,
    trace: &IterationTrace,
) -> Summary {
    let s = &trace.summary;
    let (detail, step) = match &s.stop_reason {
        StopReason::SolverError { step, message } => (Some(message.clone()), Some(*step)),
        _ => (None, None),
    };
    Summary {
        scheme,
        statement: scheme.statement(),
        space: s.final_point.space(),
        sequence: sequence.to_string(),
        seed,
        iterations: s.iterations_run,
        stop_reason: s.stop_reason.label(),
        stop_detail: detail,
        solver_error_step: step,
        final_residual: s.final_residual,
        final_point: s.final_point.components(),
        target_distance: s.target_distance,
        reference: reference.map(|p| p.components()),
        trace_rows: trace.steps.len(),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("reports serialize");
    out.push(b'\n');
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

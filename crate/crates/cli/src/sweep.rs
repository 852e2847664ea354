//! `sweep`: runs a Cartesian grid of experiments derived from a base config.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;

use crate::config::{read_json, ExperimentConfig};
use crate::error::CliError;
use crate::output::{fmt_f64, write_atomic, Summary};
use crate::run::{apply_overrides, run_into};
use crate::Overrides;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "HADAMARD_ITER_THREADS";

/// One grid axis: a JSON pointer into the base config and its values.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub path: String,
    pub values: Vec<Value>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: Value,
    pub grid: Vec<Axis>,
    #[serde(default = "default_aggregate")]
    pub aggregate: String,
}

fn default_aggregate() -> String {
    "sweep.csv".into()
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub index: usize,
    pub values: Vec<Value>,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub cells: Vec<(Cell, Summary)>,
    pub aggregate_path: PathBuf,
}

impl SweepOutcome {
    /// 0 if every cell converged, 3 if any hit a solver error, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        self.cells
            .iter()
            .map(|(_, s)| s.exit_code())
            .max()
            .unwrap_or(crate::EXIT_OK)
    }
}

/// Sets `pointer` in `doc`, creating missing object members on the way.
pub fn set_pointer(doc: &mut Value, pointer: &str, new: Value) -> Result<(), CliError> {
    if pointer.is_empty() {
        *doc = new;
        return Ok(());
    }
    let Some(rest) = pointer.strip_prefix('/') else {
        return Err(CliError::config(format!("grid path {pointer:?} must start with '/'")));
    };
    let mut cur = doc;
    for raw in rest.split('/') {
        let key = raw.replace("~1", "/").replace("~0", "~");
        cur = match cur {
            Value::Object(map) => map.entry(key).or_insert(Value::Null),
            Value::Array(items) => {
                let i: usize = key
                    .parse()
                    .map_err(|_| CliError::config(format!("grid path {pointer:?}: {key:?} is not an index")))?;
                let len = items.len();
                items
                    .get_mut(i)
                    .ok_or_else(|| CliError::config(format!("grid path {pointer:?}: index {i} out of {len}")))?
            }
            Value::Null => {
                *cur = Value::Object(Default::default());
                cur.as_object_mut().expect("just set").entry(key).or_insert(Value::Null)
            }
            _ => return Err(CliError::config(format!("grid path {pointer:?} runs through a scalar"))),
        };
    }
    *cur = new;
    Ok(())
}

/// Expands and validates every cell; any invalid cell aborts the sweep.
pub fn expand(cfg: &SweepConfig, ov: &Overrides) -> Result<Vec<Cell>, CliError> {
    if cfg.grid.iter().any(|a| a.values.is_empty()) {
        return Err(CliError::config("every grid axis needs at least one value"));
    }
    let total: usize = cfg.grid.iter().map(|a| a.values.len()).product();
    let mut cells = Vec::with_capacity(total);
    for index in 0..total {
        let mut rem = index;
        let mut values = vec![Value::Null; cfg.grid.len()];
        for (j, axis) in cfg.grid.iter().enumerate().rev() {
            values[j] = axis.values[rem % axis.values.len()].clone();
            rem /= axis.values.len();
        }
        let mut doc = cfg.base.clone();
        for (axis, v) in cfg.grid.iter().zip(&values) {
            set_pointer(&mut doc, &axis.path, v.clone())?;
        }
        let mut config: ExperimentConfig = serde_json::from_value(doc)
            .map_err(|e| CliError::config(format!("sweep cell {index}: {e}")))?;
        apply_overrides(&mut config, ov);
        config
            .prepare()
            .map_err(|e| CliError::config(format!("sweep cell {index}: {e}")))?;
        cells.push(Cell { index, values, config });
    }
    Ok(cells)
}

fn thread_cap() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("{THREADS_ENV} must be a thread count, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

pub fn cell_dir(out: &Path, index: usize) -> PathBuf {
    out.join(format!("cell_{index:04}"))
}

fn aggregate_csv(cfg: &SweepConfig, rows: &[(Cell, Summary)]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["cell".to_string()];
    header.extend(cfg.grid.iter().map(|a| a.path.clone()));
    header.extend(
        [
            "scheme",
            "stop_reason",
            "iterations",
            "iterations_to_tolerance",
            "final_residual",
            "target_distance",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    for (cell, s) in rows {
        let mut row = vec![cell.index.to_string()];
        row.extend(cell.values.iter().map(|v| v.to_string()));
        row.push(s.scheme.as_str().to_string());
        row.push(s.stop_reason.to_string());
        row.push(s.iterations.to_string());
        row.push(if s.stop_reason == "converged" { s.iterations.to_string() } else { String::new() });
        row.push(fmt_f64(s.final_residual));
        row.push(s.target_distance.map(fmt_f64).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn cmd_sweep(config: &Path, ov: &Overrides) -> Result<SweepOutcome, CliError> {
    let cfg: SweepConfig = read_json(config)?;
    let cells = expand(&cfg, ov)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap()?)
        .build()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    let results: Vec<Result<Summary, CliError>> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| run_into(&c.config, &cell_dir(&ov.out, c.index)).map(|o| o.summary))
            .collect()
    });
    let mut rows = Vec::with_capacity(cells.len());
    for (cell, r) in cells.into_iter().zip(results) {
        rows.push((cell, r?));
    }
    let aggregate_path = ov.out.join(&cfg.aggregate);
    let bytes = aggregate_csv(&cfg, &rows).map_err(|e| CliError::config(format!("aggregate encoding: {e}")))?;
    write_atomic(&aggregate_path, &bytes)?;
    Ok(SweepOutcome {
        cells: rows,
        aggregate_path,
    })
}

//! `check`: runs named diagnostic checks and writes a report bundle.

use std::path::{Path, PathBuf};

use hadamard_core::diagnostics::{
    check_fejer, check_halpern_target, check_model_space, check_nested_fixed_sets, check_quasi_firm,
    check_space_axioms, check_sqn_inequality, negative, CheckReport, SqnSource,
};
use hadamard_core::operators::catalog_operator;
use hadamard_core::resolvents::{bifunction_fixture, objective_fixture, BifunctionDescriptor, FunctionDescriptor};
use hadamard_core::{Error, ModelSpace, OperatorDescriptor, PointSpec, SpacePoint};
use serde::{Deserialize, Serialize};

use crate::config::{read_json, ExperimentConfig};
use crate::error::CliError;
use crate::output::{to_json, write_atomic};
use crate::Overrides;

fn default_samples() -> usize {
    500
}

fn default_report() -> String {
    "checks.json".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    #[serde(default)]
    pub seed: u64,
    pub checks: Vec<CheckSpec>,
    #[serde(default = "default_report")]
    pub report: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SqnSpec {
    Ishikawa { operator: OperatorDescriptor, alpha: f64, beta: f64 },
    Lipschitz { operator: OperatorDescriptor, lambda: f64 },
    Equilibrium { bifunction: BifunctionDescriptor, lambda: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Control {
    SpaceAxioms,
    Fejer,
    QuasiFirm,
    SqnIshikawa,
    SqnLipschitz,
    SqnEquilibrium,
    NestedFixedSets,
    HalpernTarget,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    SpaceAxioms {
        spaces: Vec<ModelSpace>,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    QuasiFirm {
        space: ModelSpace,
        function: FunctionDescriptor,
        lambda: f64,
        /// Defaults to a minimizer declared by the fixture.
        #[serde(default)]
        witness: Option<PointSpec>,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Sqn {
        space: ModelSpace,
        source: SqnSpec,
        #[serde(default)]
        witness: Option<PointSpec>,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    NestedFixedSets {
        space: ModelSpace,
        function: FunctionDescriptor,
        lambda: f64,
        mu: f64,
        candidates: Vec<PointSpec>,
    },
    /// Runs the experiment and checks Fejér monotonicity toward `point`
    /// (default: the sequence's witness).
    Fejer {
        experiment: Box<ExperimentConfig>,
        #[serde(default)]
        point: Option<PointSpec>,
    },
    /// Runs a Halpern experiment and compares its limit with `Proj_F u`.
    HalpernTarget { experiment: Box<ExperimentConfig>, tolerance: f64 },
    /// Runs a checker on its purpose-built violating fixture; expected to fail.
    NegativeControl {
        control: Control,
        #[serde(default = "default_samples")]
        samples: usize,
    },
}

impl CheckSpec {
    pub fn label(&self) -> String {
        match self {
            CheckSpec::SpaceAxioms { .. } => "space_axioms".into(),
            CheckSpec::QuasiFirm { .. } => "quasi_firm".into(),
            CheckSpec::Sqn { source, .. } => match source {
                SqnSpec::Ishikawa { .. } => "sqn_ishikawa".into(),
                SqnSpec::Lipschitz { .. } => "sqn_lipschitz".into(),
                SqnSpec::Equilibrium { .. } => "sqn_equilibrium".into(),
            },
            CheckSpec::NestedFixedSets { .. } => "nested_fixed_sets".into(),
            CheckSpec::Fejer { .. } => "fejer".into(),
            CheckSpec::HalpernTarget { .. } => "halpern_target".into(),
            CheckSpec::NegativeControl { control, .. } => {
                format!("negative_control:{}", serde_json::to_value(control).expect("unit variant"))
                    .replace('"', "")
            }
        }
    }

    /// Rejects fixture errors before any check runs.
    fn validate(&self) -> Result<(), CliError> {
        match self {
            CheckSpec::QuasiFirm { space, function, .. } | CheckSpec::NestedFixedSets { space, function, .. } => {
                objective_fixture(*space, function)?;
            }
            CheckSpec::Sqn { space, source, .. } => {
                sqn_source(*space, source)?;
            }
            CheckSpec::Fejer { experiment, .. } | CheckSpec::HalpernTarget { experiment, .. } => {
                experiment.prepare()?;
            }
            CheckSpec::SpaceAxioms { .. } | CheckSpec::NegativeControl { .. } => {}
        }
        Ok(())
    }

    pub fn evaluate(&self, seed: u64) -> Result<CheckReport, Error> {
        match self {
            CheckSpec::SpaceAxioms { spaces, samples } => {
                let mut all = CheckReport::new("space_axioms");
                for s in spaces {
                    let mut r = check_model_space(*s, *samples, seed)?;
                    r.check_name = format!("{s:?}");
                    all.absorb(r);
                }
                Ok(all)
            }
            CheckSpec::QuasiFirm {
                space,
                function,
                lambda,
                witness,
                samples,
            } => {
                let f = objective_fixture(*space, function)?;
                let w = match witness {
                    Some(p) => p.resolve(*space)?,
                    None => f
                        .argmin()
                        .ok_or_else(|| missing("minimizer", f.name()))?
                        .representative(*space)?,
                };
                check_quasi_firm(&f, *lambda, &w, *samples, seed)
            }
            CheckSpec::Sqn {
                space,
                source,
                witness,
                samples,
            } => {
                let (src, default) = sqn_source(*space, source)?;
                let w = match (witness, default) {
                    (Some(p), _) => p.resolve(*space)?,
                    (None, Some(p)) => p,
                    (None, None) => return Err(missing("witness", "sqn source")),
                };
                check_sqn_inequality(&src, &w, *samples, seed)
            }
            CheckSpec::NestedFixedSets {
                space,
                function,
                lambda,
                mu,
                candidates,
            } => {
                let f = objective_fixture(*space, function)?;
                let pts = candidates.iter().map(|c| c.resolve(*space)).collect::<Result<Vec<_>, _>>()?;
                check_nested_fixed_sets(&f, *lambda, *mu, &pts)
            }
            CheckSpec::Fejer { experiment, point } => {
                let prepared = experiment.prepare().map_err(core_error)?;
                let p = match point {
                    Some(p) => p.resolve(prepared.space)?,
                    None => prepared
                        .scheme
                        .sequence
                        .witness()
                        .cloned()
                        .ok_or_else(|| missing("witness", prepared.scheme.sequence.label()))?,
                };
                check_fejer(&prepared.scheme.run(&prepared.run)?, &p)
            }
            CheckSpec::HalpernTarget { experiment, tolerance } => {
                let prepared = experiment.prepare().map_err(core_error)?;
                let seq = &prepared.scheme.sequence;
                let set = seq.fixed_set().ok_or_else(|| missing("fixed set", seq.label()))?.clone();
                let u = prepared
                    .run
                    .anchor
                    .clone()
                    .ok_or_else(|| Error::Config("halpern_target needs an anchor".into()))?;
                check_halpern_target(&prepared.scheme.run(&prepared.run)?, &u, &set, *tolerance)
            }
            CheckSpec::NegativeControl { control, samples } => run_control(*control, *samples, seed),
        }
    }
}

fn missing(what: &str, of: &str) -> Error {
    Error::Config(format!("{of} declares no {what}; give one explicitly"))
}

fn core_error(e: CliError) -> Error {
    match e {
        CliError::Core(e) => e,
        other => Error::Config(other.to_string()),
    }
}

fn sqn_source(space: ModelSpace, spec: &SqnSpec) -> Result<(SqnSource, Option<SpacePoint>), Error> {
    Ok(match spec {
        SqnSpec::Ishikawa { operator, alpha, beta } => {
            let t = catalog_operator(space, operator)?;
            let w = t.witness().cloned();
            (
                SqnSource::Ishikawa {
                    operator: t,
                    alpha: *alpha,
                    beta: *beta,
                },
                w,
            )
        }
        SqnSpec::Lipschitz { operator, lambda } => {
            let t = catalog_operator(space, operator)?;
            let w = t.witness().cloned();
            (SqnSource::Lipschitz { operator: t, lambda: *lambda }, w)
        }
        SqnSpec::Equilibrium { bifunction, lambda } => {
            let f = bifunction_fixture(space, bifunction)?;
            let w = f.solutions().map(|s| s.representative(space)).transpose()?;
            (SqnSource::Equilibrium { bifunction: f, lambda: *lambda }, w)
        }
    })
}

pub fn run_control(control: Control, samples: usize, seed: u64) -> Result<CheckReport, Error> {
    let r1 = ModelSpace::euclidean(1);
    let e2 = ModelSpace::euclidean(2);
    match control {
        Control::SpaceAxioms => check_space_axioms(
            &negative::RoundSphere,
            |g| Ok(negative::RoundSphere.sample(g, 1.2)),
            samples,
            seed,
        ),
        Control::Fejer => {
            let p = e2.origin();
            check_fejer(&negative::receding_trace(&p)?, &p)
        }
        Control::QuasiFirm => {
            let a = e2.point(vec![1.0, 1.0])?;
            check_quasi_firm(&negative::reflecting_quadratic(e2, a.clone()), 1.0, &a, samples, seed)
        }
        Control::SqnIshikawa | Control::SqnLipschitz | Control::SqnEquilibrium => {
            let idx = match control {
                Control::SqnIshikawa => 0,
                Control::SqnLipschitz => 1,
                _ => 2,
            };
            let src = negative::sqn_controls()?.swap_remove(idx);
            let w = if idx == 2 { e2.origin() } else { r1.origin() };
            check_sqn_inequality(&src, &w, samples, seed)
        }
        Control::NestedFixedSets => {
            let pts = [r1.point(vec![0.0])?, r1.point(vec![4.0])?];
            check_nested_fixed_sets(&negative::order_dependent_resolvent(), 1.0, 0.5, &pts)
        }
        Control::HalpernTarget => {
            let (trace, u, set) = negative::unanchored_trace()?;
            check_halpern_target(&trace, &u, &set, 5e-3)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub label: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// The machine-readable output of `check`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckBundle {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
}

impl CheckBundle {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            crate::EXIT_OK
        } else {
            crate::EXIT_CHECK_FAILED
        }
    }
}

/// Runs every check with seed `seed + index`.
pub fn run_checks(cfg: &CheckConfig) -> Result<CheckBundle, CliError> {
    for c in &cfg.checks {
        c.validate()?;
    }
    let checks: Vec<CheckEntry> = cfg
        .checks
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let label = c.label();
            match c.evaluate(cfg.seed.wrapping_add(i as u64)) {
                Ok(r) => CheckEntry {
                    label,
                    passed: r.passed,
                    report: Some(r),
                    error: None,
                },
                Err(e) => CheckEntry {
                    label,
                    passed: false,
                    report: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(CheckBundle {
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn cmd_check(config: &Path, ov: &Overrides) -> Result<(CheckBundle, PathBuf), CliError> {
    let mut cfg: CheckConfig = read_json(config)?;
    if let Some(seed) = ov.seed {
        cfg.seed = seed;
    }
    let bundle = run_checks(&cfg)?;
    let path = ov.out.join(&cfg.report);
    write_atomic(&path, &to_json(&bundle))?;
    Ok((bundle, path))
}

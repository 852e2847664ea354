use serde::{Deserialize, Serialize};

use super::{Schedule, ScheduleClass, ScheduleRule};
use crate::error::{Error, Result};
use crate::operators::{ishikawa_sequence, mann_operator, Operator, OperatorSequence};
use crate::resolvents::{resolvent_sequence, ResolventSource};

/// Default margin `ε` in `λ_k >= θ + ε` for equilibrium schemes.
pub const DEFAULT_EQUILIBRIUM_MARGIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Ishikawa,
    HalpernIshikawa,
    Mann,
    HalpernMann,
    Ppa,
    HalpernPpa,
    PpaLipschitz,
    HalpernPpaLipschitz,
    PpaEquilibrium,
    HalpernPpaEquilibrium,
}

impl SchemeName {
    pub const ALL: [SchemeName; 10] = [
        SchemeName::Ishikawa,
        SchemeName::HalpernIshikawa,
        SchemeName::Mann,
        SchemeName::HalpernMann,
        SchemeName::Ppa,
        SchemeName::HalpernPpa,
        SchemeName::PpaLipschitz,
        SchemeName::HalpernPpaLipschitz,
        SchemeName::PpaEquilibrium,
        SchemeName::HalpernPpaEquilibrium,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeName::Ishikawa => "ishikawa",
            SchemeName::HalpernIshikawa => "halpern_ishikawa",
            SchemeName::Mann => "mann",
            SchemeName::HalpernMann => "halpern_mann",
            SchemeName::Ppa => "ppa",
            SchemeName::HalpernPpa => "halpern_ppa",
            SchemeName::PpaLipschitz => "ppa_lipschitz",
            SchemeName::HalpernPpaLipschitz => "halpern_ppa_lipschitz",
            SchemeName::PpaEquilibrium => "ppa_equilibrium",
            SchemeName::HalpernPpaEquilibrium => "halpern_ppa_equilibrium",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.as_str() == name)
            .ok_or_else(|| Error::config(format!("unknown scheme {name:?}")))
    }

    pub fn engine(&self) -> Engine {
        match self {
            SchemeName::HalpernIshikawa
            | SchemeName::HalpernMann
            | SchemeName::HalpernPpa
            | SchemeName::HalpernPpaLipschitz
            | SchemeName::HalpernPpaEquilibrium => Engine::Halpern,
            _ => Engine::Sequence,
        }
    }

    /// The convergence statement the scheme instantiates.
    pub fn statement(&self) -> &'static str {
        match self {
            SchemeName::Ishikawa => {
                "Ishikawa iteration of a demiclosed quasi-nonexpansive T Delta-converges to a point of F(T)"
            }
            SchemeName::HalpernIshikawa => {
                "Halpern-Ishikawa iteration converges strongly to Proj_{F(T)} u"
            }
            SchemeName::Mann => "Mann iteration Delta-converges to a point of F(T)",
            SchemeName::HalpernMann => "Halpern-Mann iteration converges strongly to Proj_{F(T)} u",
            SchemeName::Ppa => {
                "proximal point iterates of a quasi-convex weakly convex f Delta-converge to a fixed point of the resolvents"
            }
            SchemeName::HalpernPpa => "Halpern proximal point iteration converges strongly to Proj_{Argmin f} u",
            SchemeName::PpaLipschitz => {
                "proximal point iteration of a Lipschitz quasi-nonexpansive T Delta-converges to a point of F(T)"
            }
            SchemeName::HalpernPpaLipschitz => {
                "Halpern proximal point iteration of a Lipschitz map converges strongly to Proj_{F(T)} u"
            }
            SchemeName::PpaEquilibrium => {
                "proximal point iteration of a pseudo-monotone bifunction Delta-converges to a point of S(f, K)"
            }
            SchemeName::HalpernPpaEquilibrium => {
                "Halpern proximal point iteration of a bifunction converges strongly to Proj_{S(f, K)} u"
            }
        }
    }

    fn family(&self) -> Family {
        match self {
            SchemeName::Ishikawa | SchemeName::HalpernIshikawa => Family::Ishikawa,
            SchemeName::Mann | SchemeName::HalpernMann => Family::Mann,
            SchemeName::Ppa | SchemeName::HalpernPpa => Family::Convex,
            SchemeName::PpaLipschitz | SchemeName::HalpernPpaLipschitz => Family::Lipschitz,
            SchemeName::PpaEquilibrium | SchemeName::HalpernPpaEquilibrium => Family::Equilibrium,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Ishikawa,
    Mann,
    Convex,
    Lipschitz,
    Equilibrium,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Sequence,
    Halpern,
}

/// Raw schedule rules by role; classes are attached by [`build_scheme`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSchedules {
    /// Halpern weights; default `1/(k+1)`.
    #[serde(default)]
    pub anchor: Option<ScheduleRule>,
    /// Mann/Ishikawa step weights; default `1/2`.
    #[serde(default)]
    pub alpha: Option<ScheduleRule>,
    /// Ishikawa inner weights; required for Ishikawa schemes.
    #[serde(default)]
    pub beta: Option<ScheduleRule>,
    /// Resolvent orders; required for proximal schemes.
    #[serde(default)]
    pub lambda: Option<ScheduleRule>,
    /// `ε` in `λ_k >= θ + ε`.
    #[serde(default)]
    pub margin: Option<f64>,
    /// Upper bound `λ̄` on equilibrium orders; required there.
    #[serde(default)]
    pub lambda_bar: Option<f64>,
}

/// A wired scheme: the operator sequence and the engine that drives it.
#[derive(Clone, Debug)]
pub struct Scheme {
    pub name: SchemeName,
    pub sequence: OperatorSequence,
    pub engine: Engine,
    /// Validated Halpern weights, for Halpern schemes.
    pub anchor_weights: Option<Schedule>,
}

fn hypothesis(role: &str, requirement: &str, e: Error) -> Error {
    let detail = match e {
        Error::Config(m) | Error::Domain(m) => m,
        other => other.to_string(),
    };
    Error::config(format!("schedule {role} violates the hypothesis {requirement}: {detail}"))
}

fn require<'a>(rule: &'a Option<ScheduleRule>, role: &str, scheme: SchemeName) -> Result<&'a ScheduleRule> {
    rule.as_ref()
        .ok_or_else(|| Error::config(format!("scheme {} needs a {role} schedule", scheme.as_str())))
}

fn operator_source(source: &ResolventSource, scheme: SchemeName) -> Result<&Operator> {
    match source {
        ResolventSource::Operator(t) => Ok(t),
        _ => Err(Error::config(format!("scheme {} takes an operator", scheme.as_str()))),
    }
}

/// Validates the schedules of `name` against its hypotheses and wires the
/// operator sequence.
pub fn build_scheme(name: SchemeName, source: &ResolventSource, schedules: &SchemeSchedules) -> Result<Scheme> {
    let anchor_weights = match name.engine() {
        Engine::Halpern => {
            let rule = schedules.anchor.clone().unwrap_or_else(ScheduleRule::harmonic);
            Some(
                Schedule::new(rule, ScheduleClass::HalpernAnchor)
                    .map_err(|e| hypothesis("anchor", "lim alpha_k = 0 and sum alpha_k = +inf", e))?,
            )
        }
        Engine::Sequence => {
            if schedules.anchor.is_some() {
                return Err(Error::config(format!(
                    "scheme {} takes no anchor schedule",
                    name.as_str()
                )));
            }
            None
        }
    };
    let alpha = || -> Result<Schedule> {
        let rule = schedules.alpha.clone().unwrap_or(ScheduleRule::constant(0.5));
        Schedule::new(rule, ScheduleClass::MannParam { bound: None })
            .map_err(|e| hypothesis("alpha", "0 < alpha_k < 1 with limsup alpha_k < 1", e))
    };
    let sequence = match name.family() {
        Family::Ishikawa => {
            let t = operator_source(source, name)?;
            let beta = Schedule::new(require(&schedules.beta, "beta", name)?.clone(), ScheduleClass::VanishingParam)
                .map_err(|e| hypothesis("beta", "0 <= beta_k <= 1 with beta_k -> 0", e))?;
            ishikawa_sequence(t, &alpha()?, &beta)?
        }
        Family::Mann => {
            let t = operator_source(source, name)?;
            let a = alpha()?;
            let t2 = t.clone();
            let a2 = a.clone();
            // surface weight or class errors before running
            mann_operator(t, a.value(1))?;
            OperatorSequence::new(format!("mann({})", t.name()), t.space(), move |k| mann_operator(&t2, a2.value(k)))
                .with_witness(t.witness().cloned())
                .with_fixed_set(t.fixed_set().cloned())
        }
        Family::Convex | Family::Lipschitz => {
            let ok = matches!(
                (name.family(), source),
                (Family::Convex, ResolventSource::Function(_)) | (Family::Lipschitz, ResolventSource::Operator(_))
            );
            if !ok {
                let what = if name.family() == Family::Convex { "function" } else { "operator" };
                return Err(Error::config(format!("scheme {} takes a {what}", name.as_str())));
            }
            let lambda = Schedule::new(
                require(&schedules.lambda, "lambda", name)?.clone(),
                ScheduleClass::ResolventParam { lower: None, upper: None },
            )
            .map_err(|e| hypothesis("lambda", "lambda_k > 0 with liminf lambda_k > 0", e))?;
            resolvent_sequence(source, &lambda)?
        }
        Family::Equilibrium => {
            let ResolventSource::Bifunction(f) = source else {
                return Err(Error::config(format!("scheme {} takes a bifunction", name.as_str())));
            };
            let eps = schedules.margin.unwrap_or(DEFAULT_EQUILIBRIUM_MARGIN);
            if !(eps > 0.0) {
                return Err(Error::config(format!("equilibrium margin must be positive, got {eps}")));
            }
            let Some(bar) = schedules.lambda_bar else {
                return Err(Error::config(format!(
                    "scheme {} needs lambda_bar, the upper end of (theta, lambda_bar]",
                    name.as_str()
                )));
            };
            let lambda = Schedule::new(
                require(&schedules.lambda, "lambda", name)?.clone(),
                ScheduleClass::ResolventParam {
                    lower: Some(f.theta() + eps),
                    upper: Some(bar),
                },
            )
            .map_err(|e| {
                hypothesis(
                    "lambda",
                    &format!("theta + eps <= lambda_k <= lambda_bar with theta = {}, eps = {eps}", f.theta()),
                    e,
                )
            })?;
            resolvent_sequence(source, &lambda)?
        }
    };
    Ok(Scheme {
        name,
        sequence,
        engine: name.engine(),
        anchor_weights,
    })
}

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Indices at which every schedule is spot-checked on construction.
pub const SPOT_CHECK_INDICES: [usize; 4] = [1, 10, 1_000, 1_000_000];

/// How a parameter sequence `k -> value` (k >= 1) is generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleRule {
    Constant {
        value: f64,
    },
    /// `base + scale / (k + offset)^exponent`.
    Power {
        #[serde(default)]
        base: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        offset: f64,
        exponent: f64,
    },
    /// Arbitrary generator with declared asymptotics; library use only.
    #[serde(skip)]
    Custom(CustomRule),
}

fn one() -> f64 {
    1.0
}

/// A user-supplied generator. Its limit and the divergence of its partial
/// sums cannot be inferred from samples, so they are declared.
#[derive(Clone)]
pub struct CustomRule {
    pub generator: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    pub limit: f64,
    pub sum_diverges: bool,
}

impl fmt::Debug for CustomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomRule")
            .field("limit", &self.limit)
            .field("sum_diverges", &self.sum_diverges)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomRule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.generator, &other.generator)
            && self.limit == other.limit
            && self.sum_diverges == other.sum_diverges
    }
}

impl ScheduleRule {
    pub fn constant(value: f64) -> Self {
        ScheduleRule::Constant { value }
    }

    /// `scale / (k + offset)^exponent`.
    pub fn power(scale: f64, offset: f64, exponent: f64) -> Self {
        ScheduleRule::Power {
            base: 0.0,
            scale,
            offset,
            exponent,
        }
    }

    /// `1 / (k + 1)`.
    pub fn harmonic() -> Self {
        Self::power(1.0, 1.0, 1.0)
    }

    pub fn custom(
        generator: impl Fn(usize) -> f64 + Send + Sync + 'static,
        limit: f64,
        sum_diverges: bool,
    ) -> Self {
        ScheduleRule::Custom(CustomRule {
            generator: Arc::new(generator),
            limit,
            sum_diverges,
        })
    }

    pub fn value(&self, k: usize) -> f64 {
        match self {
            ScheduleRule::Constant { value } => *value,
            ScheduleRule::Power {
                base,
                scale,
                offset,
                exponent,
            } => base + scale * (k as f64 + offset).powf(-exponent),
            ScheduleRule::Custom(c) => (c.generator)(k),
        }
    }

    fn limit(&self) -> f64 {
        match self {
            ScheduleRule::Constant { value } => *value,
            ScheduleRule::Power {
                base,
                scale,
                exponent,
                ..
            } => {
                if *exponent > 0.0 || *scale == 0.0 {
                    *base
                } else if *exponent == 0.0 {
                    base + scale
                } else {
                    scale.signum() * f64::INFINITY
                }
            }
            ScheduleRule::Custom(c) => c.limit,
        }
    }

    fn sum_diverges(&self) -> bool {
        match self {
            ScheduleRule::Custom(c) => c.sum_diverges,
            ScheduleRule::Power {
                base,
                scale,
                exponent,
                ..
            } if self.limit() == 0.0 => *base == 0.0 && *scale != 0.0 && *exponent <= 1.0,
            _ => self.limit() != 0.0,
        }
    }

    /// `(inf, sup)` over all k >= 1 when the rule is monotone in k.
    fn range(&self) -> Option<(f64, f64)> {
        match self {
            ScheduleRule::Custom(_) => None,
            _ => {
                let (first, lim) = (self.value(1), self.limit());
                Some((first.min(lim), first.max(lim)))
            }
        }
    }

    fn check_well_formed(&self) -> Result<()> {
        match self {
            ScheduleRule::Power { offset, .. } if *offset <= -1.0 => Err(Error::config(format!(
                "power schedule offset {offset} makes k + offset non-positive at k = 1"
            ))),
            _ => {
                for k in SPOT_CHECK_INDICES {
                    let v = self.value(k);
                    if !v.is_finite() {
                        return Err(Error::config(format!("schedule value at k = {k} is {v}")));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Constraint classes a parameter sequence can be declared to satisfy.
#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleClass {
    /// Halpern anchor weights: values in (0, 1), `lim = 0`, divergent sum.
    HalpernAnchor,
    /// Mann/Ishikawa step weights: values in (0, 1) with `limsup < 1`
    /// (and `limsup <= bound` when a bound is declared).
    MannParam { bound: Option<f64> },
    /// Ishikawa inner weights: values in [0, 1] tending to zero.
    VanishingParam,
    /// Resolvent orders: positive with `liminf > 0`; optionally every
    /// value in `[lower, upper]`.
    ResolventParam {
        lower: Option<f64>,
        upper: Option<f64>,
    },
}

/// A validated parameter sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    rule: ScheduleRule,
    class: ScheduleClass,
}

impl Schedule {
    /// Validates `rule` against `class`: values at the spot-check indices
    /// must be in range and the asymptotic requirements must hold.
    pub fn new(rule: ScheduleRule, class: ScheduleClass) -> Result<Self> {
        rule.check_well_formed()?;
        let spots: Vec<(usize, f64)> = SPOT_CHECK_INDICES.iter().map(|&k| (k, rule.value(k))).collect();
        let range = rule.range();
        let lim = rule.limit();
        // Monotone rules sweep from the first value towards the limit, so the
        // limit only has to lie in the closure of the admissible interval.
        let in_range = |lo: f64, hi: f64, open: bool, what: &str| -> Result<()> {
            let ok = |v: f64| if open { v > lo && v < hi } else { v >= lo && v <= hi };
            if let Some((inf, sup)) = range {
                if !(inf >= lo && sup <= hi) {
                    return Err(Error::config(format!(
                        "values range over [{inf}, {sup}]; {what}"
                    )));
                }
            }
            for (k, v) in &spots {
                if !ok(*v) {
                    return Err(Error::config(format!("value {v} at k = {k}; {what}")));
                }
            }
            Ok(())
        };
        match &class {
            ScheduleClass::HalpernAnchor => {
                if lim != 0.0 {
                    return Err(Error::config(format!(
                        "anchor weights must satisfy lim alpha_k = 0, got limit {lim}"
                    )));
                }
                if !rule.sum_diverges() {
                    return Err(Error::config(
                        "anchor weights must satisfy sum alpha_k = +inf (divergent series); this sequence is summable",
                    ));
                }
                in_range(0.0, 1.0, true, "anchor weights must lie in (0, 1)")?;
            }
            ScheduleClass::MannParam { bound } => {
                let b = bound.unwrap_or(lim);
                if !(b < 1.0) {
                    return Err(Error::config(format!(
                        "step weights must satisfy limsup alpha_k < 1, got {b}"
                    )));
                }
                if lim > b {
                    return Err(Error::config(format!(
                        "limsup alpha_k = {lim} exceeds the declared bound {b}"
                    )));
                }
                in_range(0.0, 1.0, true, "step weights must lie in (0, 1)")?;
            }
            ScheduleClass::VanishingParam => {
                in_range(0.0, 1.0, false, "inner weights must lie in [0, 1]")?;
                if lim != 0.0 {
                    return Err(Error::config(format!(
                        "inner weights must satisfy beta_k -> 0, got limit {lim}"
                    )));
                }
            }
            ScheduleClass::ResolventParam { lower, upper } => {
                in_range(0.0, f64::INFINITY, true, "resolvent orders must be positive")?;
                if !(lim > 0.0) {
                    return Err(Error::config(format!(
                        "resolvent orders must satisfy liminf lambda_k > 0, got {lim}"
                    )));
                }
                if let Some(lo) = lower {
                    let inf = range.map_or(lim, |r| r.0);
                    in_range(*lo, f64::INFINITY, false, &format!("resolvent orders must stay >= {lo}"))?;
                    if inf < *lo {
                        return Err(Error::config(format!(
                            "liminf lambda_k = {inf} is below the required lower bound {lo}"
                        )));
                    }
                }
                if let Some(hi) = upper {
                    in_range(f64::NEG_INFINITY, *hi, false, &format!("resolvent orders must stay <= {hi}"))?;
                    if lim > *hi {
                        return Err(Error::config(format!(
                            "lambda_k tends to {lim}, above the upper bound {hi}"
                        )));
                    }
                }
            }
        }
        Ok(Schedule { rule, class })
    }

    pub fn value(&self, k: usize) -> f64 {
        self.rule.value(k)
    }

    pub fn rule(&self) -> &ScheduleRule {
        &self.rule
    }

    pub fn class(&self) -> &ScheduleClass {
        &self.class
    }

    /// Supremum over k >= 1 when known analytically, else the largest
    /// spot-checked value.
    pub fn supremum(&self) -> f64 {
        match self.rule.range() {
            Some((_, hi)) => hi,
            None => SPOT_CHECK_INDICES
                .iter()
                .map(|&k| self.value(k))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

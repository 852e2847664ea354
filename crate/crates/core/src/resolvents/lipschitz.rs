use crate::error::{Error, Result};
use crate::geometry::SpacePoint;
use crate::operators::Operator;

pub const LIPSCHITZ_TOL: f64 = 1e-12;
pub const LIPSCHITZ_BUDGET: usize = 1_000_000;
/// Allowed excess of an observed step ratio over the contraction factor.
pub const RATIO_SLACK: f64 = 1e-6;

/// Outcome of the inner fixed-point iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzSolve {
    pub point: SpacePoint,
    pub iterations: usize,
    /// Largest observed `d(y_{j+1}, y_j) / d(y_j, y_{j-1})` above the noise floor.
    pub max_ratio: f64,
    /// Contraction factor `αλ/(1+λ)`.
    pub bound: f64,
}

/// Contraction factor of `y ↦ (1/(1+λ)) x ⊕ (λ/(1+λ)) T y`, after checking
/// that `λ < 1/(α-1)` when `α > 1`.
pub fn contraction_factor(t: &Operator, lambda: f64) -> Result<f64> {
    let Some(alpha) = t.lipschitz() else {
        return Err(Error::domain(format!("operator {} has no Lipschitz constant", t.name())));
    };
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("resolvent order must be positive, got {lambda}")));
    }
    if alpha > 1.0 && lambda >= 1.0 / (alpha - 1.0) {
        return Err(Error::domain(format!(
            "lambda = {lambda} >= 1/(alpha - 1) = {} for {alpha}-Lipschitz {}",
            1.0 / (alpha - 1.0),
            t.name()
        )));
    }
    Ok(alpha * lambda / (1.0 + lambda))
}

/// The fixed point of `y ↦ (1/(1+λ)) x ⊕ (λ/(1+λ)) T y`.
pub fn lipschitz_resolvent(t: &Operator, lambda: f64, x: &SpacePoint) -> Result<SpacePoint> {
    lipschitz_resolvent_detailed(t, lambda, x).map(|s| s.point)
}

pub fn lipschitz_resolvent_detailed(t: &Operator, lambda: f64, x: &SpacePoint) -> Result<LipschitzSolve> {
    let bound = contraction_factor(t, lambda)?;
    let space = t.space();
    let w = lambda / (1.0 + lambda);
    let mut y = x.clone();
    let mut prev_step: Option<f64> = None;
    let mut floor = 0.0;
    let mut max_ratio: f64 = 0.0;
    for j in 1..=LIPSCHITZ_BUDGET {
        let next = space.combine(x, &t.apply(&y)?, w)?;
        let step = space.distance(&y, &next)?;
        match prev_step {
            None => floor = 1e-7 * (1.0 + step),
            Some(p) if p > floor => {
                let ratio = step / p;
                max_ratio = max_ratio.max(ratio);
                if ratio > bound + RATIO_SLACK {
                    return Err(Error::solver(
                        format!(
                            "step ratio {ratio} exceeds the contraction factor {bound} of {}",
                            t.name()
                        ),
                        Some(step),
                    ));
                }
            }
            Some(_) => {}
        }
        y = next;
        if step <= LIPSCHITZ_TOL {
            return Ok(LipschitzSolve {
                point: y,
                iterations: j,
                max_ratio,
                bound,
            });
        }
        prev_step = Some(step);
    }
    Err(Error::solver(
        format!("resolvent iteration for {} exceeded {LIPSCHITZ_BUDGET} steps", t.name()),
        prev_step,
    ))
}

use super::Objective;
use crate::error::{Error, Result};
use crate::geometry::{ConvexSubset, ModelSpace, SpacePoint};

/// Stopping rule and budget of the gradient solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProxOptions {
    pub gradient_tol: f64,
    pub max_steps: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Tolerance of the first-order re-check on closed-form outputs.
    pub recheck_tol: f64,
}

impl Default for ProxOptions {
    fn default() -> Self {
        ProxOptions {
            gradient_tol: 1e-10,
            max_steps: 10_000,
            armijo: 1e-4,
            recheck_tol: 1e-7,
        }
    }
}

/// `argmin_y f(y) + d²(y, x) / (2λ)`.
pub fn convex_resolvent(f: &Objective, lambda: f64, x: &SpacePoint) -> Result<SpacePoint> {
    convex_resolvent_on(f, lambda, x, &ConvexSubset::WholeSpace, &ProxOptions::default())
}

fn check_order(f: &Objective, lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("resolvent order must be positive, got {lambda}")));
    }
    if lambda >= f.max_order() {
        return Err(Error::domain(format!(
            "resolvent order {lambda} >= 1/(2 alpha) = {} for {}-weakly convex {}",
            f.max_order(),
            f.weak_convexity(),
            f.name()
        )));
    }
    Ok(())
}

/// [`convex_resolvent`] restricted to `y ∈ K`. The closed form is used only
/// when `K` is the whole space.
pub fn convex_resolvent_on(
    f: &Objective,
    lambda: f64,
    x: &SpacePoint,
    set: &ConvexSubset,
    opts: &ProxOptions,
) -> Result<SpacePoint> {
    check_order(f, lambda)?;
    let space = f.space();
    if x.space() != space {
        return Err(Error::domain(format!("{} lives on {space:?}", f.name())));
    }
    let whole = matches!(set, ConvexSubset::WholeSpace);
    match f.closed_form() {
        Some(j) if whole => {
            let y = j(lambda, x)?;
            recheck(f, lambda, x, &y, opts)?;
            Ok(y)
        }
        _ => descend(f, lambda, x, set, opts),
    }
}

/// Gradient norm of `y ↦ f(y) + d²(y, x)/(2λ)`.
fn subproblem_gradient_norm(f: &Objective, lambda: f64, x: &SpacePoint, y: &SpacePoint) -> Option<Result<f64>> {
    let space = f.space();
    f.gradient(y).map(|g| {
        let g = g?.add(&space.log_map(y, x)?.scaled(-1.0 / lambda));
        space.tangent_norm(y, &g)
    })
}

fn recheck(f: &Objective, lambda: f64, x: &SpacePoint, y: &SpacePoint, opts: &ProxOptions) -> Result<()> {
    if let Some(norm) = subproblem_gradient_norm(f, lambda, x, y) {
        let norm = norm?;
        let scale = 1.0 + f.space().distance(x, y)? / lambda;
        if !(norm <= opts.recheck_tol * scale) {
            return Err(Error::solver(
                format!("closed-form resolvent of {} fails first-order optimality", f.name()),
                Some(norm),
            ));
        }
    }
    Ok(())
}

/// Riemannian gradient descent with Armijo backtracking, projected onto `K`.
pub fn descend(
    f: &Objective,
    lambda: f64,
    x: &SpacePoint,
    set: &ConvexSubset,
    opts: &ProxOptions,
) -> Result<SpacePoint> {
    check_order(f, lambda)?;
    let space = f.space();
    if matches!(space, ModelSpace::Spider { .. }) {
        return Err(Error::unsupported(format!(
            "{} has no closed-form resolvent and spider trees have no tangent chart",
            f.name()
        )));
    }
    if !f.has_gradient() {
        return Err(Error::unsupported(format!("{} has neither a closed form nor a gradient", f.name())));
    }
    let phi = |y: &SpacePoint| -> Result<f64> { Ok(f.eval(y)? + space.distance(y, x)?.powi(2) / (2.0 * lambda)) };
    let grad = |y: &SpacePoint| -> Result<_> {
        Ok(f.gradient(y).expect("checked above")?.add(&space.log_map(y, x)?.scaled(-1.0 / lambda)))
    };
    let whole = matches!(set, ConvexSubset::WholeSpace);
    let mut y = space.project(set, x)?;
    let mut val = phi(&y)?;
    if !val.is_finite() {
        return Err(Error::domain(format!("{} is not finite at the starting point", f.name())));
    }
    let mut step = lambda;
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_steps {
        let g = grad(&y)?;
        let gnorm = space.tangent_norm(&y, &g)?;
        if whole && gnorm <= opts.gradient_tol {
            return Ok(y);
        }
        let mut trial = 2.0 * step;
        let accepted = loop {
            let cand = space.project(set, &space.exp_map(&y, &g.scaled(-trial))?)?;
            let moved = space.distance(&y, &cand)?;
            if !whole && moved / trial <= opts.gradient_tol {
                // projected-gradient stationarity
                return Ok(y);
            }
            let cand_val = phi(&cand)?;
            let decrease = val - cand_val;
            if decrease.abs() <= 8.0 * f64::EPSILON * (val.abs() + 1.0) {
                // values agree to rounding: only a smaller stationarity measure counts
                let progress = if whole {
                    space.tangent_norm(&cand, &grad(&cand)?)? < gnorm
                } else {
                    let gc = grad(&cand)?;
                    let next = space.project(set, &space.exp_map(&cand, &gc.scaled(-trial))?)?;
                    space.distance(&cand, &next)? < moved
                };
                if progress {
                    break Some((cand, cand_val, moved));
                }
            } else if decrease >= opts.armijo * moved * moved / trial {
                // for unconstrained steps moved = trial * |g|, the usual rule
                break Some((cand, cand_val, moved));
            }
            trial *= 0.5;
            if trial < 1e-30 * lambda {
                break None;
            }
        };
        let Some((cand, cand_val, moved)) = accepted else {
            return Err(Error::solver(
                format!("line search stalled minimizing the {} subproblem", f.name()),
                Some(if whole { gnorm } else { residual }),
            ));
        };
        step = trial;
        residual = moved / trial;
        y = cand;
        val = cand_val;
        if !whole && residual <= opts.gradient_tol {
            return Ok(y);
        }
    }
    let g = space.tangent_norm(&y, &grad(&y)?)?;
    Err(Error::solver(
        format!("{} subproblem not solved within {} steps", f.name(), opts.max_steps),
        Some(if whole { g } else { residual }),
    ))
}

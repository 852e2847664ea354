//! Resolvents of convex functions, Lipschitz maps and equilibrium
//! bifunctions, packaged as operators and operator sequences.

mod equilibrium;
mod lipschitz;
mod objective;
mod prox;

pub use equilibrium::{
    bifunction_fixture, equilibrium_resolvent, verification_points, Bifunction, BifunctionDescriptor,
    BifunctionStructure, InnerSolver, VectorField, VERIFY_TOL, VI_BUDGET, VI_TOL,
};
pub use lipschitz::{
    contraction_factor, lipschitz_resolvent, lipschitz_resolvent_detailed, LipschitzSolve, LIPSCHITZ_BUDGET,
    LIPSCHITZ_TOL, RATIO_SLACK,
};
pub use objective::{
    dist2_to_set, objective_fixture, quadratic, quartic, ClosedForm, ConvexityFlags, FunctionDescriptor, GradientFn,
    Objective, ScalarFn,
};
pub use prox::{convex_resolvent, convex_resolvent_on, descend, ProxOptions};

use crate::error::{Error, Result};
use crate::operators::{Operator, OperatorFlags, OperatorSequence};
use crate::schemes::{Schedule, ScheduleClass};

/// What a resolvent sequence is built from.
#[derive(Clone, Debug)]
pub enum ResolventSource {
    Function(Objective),
    Operator(Operator),
    Bifunction(Bifunction),
}

/// `J_λ^f` as an operator.
pub fn convex_resolvent_operator(f: &Objective, lambda: f64) -> Result<Operator> {
    if !(lambda > 0.0 && lambda < f.max_order()) {
        return Err(Error::domain(format!(
            "resolvent order {lambda} outside (0, {})",
            f.max_order()
        )));
    }
    let g = f.clone();
    let flags = OperatorFlags {
        nonexpansive: f.flags().convex,
        quasi_nonexpansive: f.flags().convex || f.flags().quasi_convex,
        demiclosed_assumed: true,
    };
    let mut op = Operator::new(format!("prox[{}]({lambda})", f.name()), f.space(), move |x| {
        convex_resolvent(&g, lambda, x)
    })
    .with_flags(flags);
    if f.flags().convex {
        op = op.with_lipschitz(1.0);
    }
    if let Some(a) = f.argmin() {
        op = if f.flags().pseudo_convex {
            op.with_fixed_set(a.clone())?
        } else {
            op.with_witness(a.representative(f.space())?)
        };
    }
    Ok(op)
}

/// `J_λ^T` as an operator; its fixed-point set is `F(T)`.
pub fn lipschitz_resolvent_operator(t: &Operator, lambda: f64) -> Result<Operator> {
    contraction_factor(t, lambda)?;
    let inner = t.clone();
    let mut op = Operator::new(format!("resolvent[{}]({lambda})", t.name()), t.space(), move |x| {
        lipschitz_resolvent(&inner, lambda, x)
    })
    .with_flags(OperatorFlags {
        nonexpansive: t.flags().nonexpansive,
        quasi_nonexpansive: t.flags().quasi_nonexpansive,
        demiclosed_assumed: true,
    });
    if let Some(s) = t.fixed_set() {
        op = op.with_fixed_set(s.clone())?;
    } else if let Some(p) = t.witness() {
        op = op.with_witness(p.clone());
    }
    Ok(op)
}

/// The equilibrium resolvent at `λ` as an operator on `K`; its fixed points
/// are the equilibrium points.
pub fn equilibrium_resolvent_operator(f: &Bifunction, lambda: f64) -> Result<Operator> {
    if !(lambda > f.theta()) {
        return Err(Error::domain(format!("lambda = {lambda} <= theta = {}", f.theta())));
    }
    let g = f.clone();
    let mut op = Operator::new(format!("ep[{}]({lambda})", f.name()), f.space(), move |x| {
        equilibrium_resolvent(&g, lambda, x)
    })
    .with_domain(f.feasible().clone())
    .with_flags(OperatorFlags {
        nonexpansive: false,
        quasi_nonexpansive: f.pseudo_monotone(),
        demiclosed_assumed: true,
    });
    if let Some(s) = f.solutions() {
        op = op.with_fixed_set(s.clone())?;
    }
    Ok(op)
}

/// `k ↦ J_{λ_k}` for the given source.
pub fn resolvent_sequence(source: &ResolventSource, lambdas: &Schedule) -> Result<OperatorSequence> {
    let ScheduleClass::ResolventParam { lower, upper } = lambdas.class() else {
        return Err(Error::config("resolvent orders must be declared with liminf lambda_k > 0"));
    };
    let (lower, upper) = (*lower, *upper);
    let sup = lambdas.supremum();
    let l = lambdas.clone();
    match source {
        ResolventSource::Function(f) => {
            if sup >= f.max_order() {
                return Err(Error::config(format!(
                    "sup lambda_k = {sup} must stay below 1/(2 alpha) = {} for {}",
                    f.max_order(),
                    f.name()
                )));
            }
            let probe = convex_resolvent_operator(f, lambdas.value(1))?;
            let g = f.clone();
            Ok(OperatorSequence::new(format!("prox[{}]", f.name()), f.space(), move |k| {
                convex_resolvent_operator(&g, l.value(k))
            })
            .with_witness(probe.witness().cloned())
            .with_fixed_set(if f.flags().pseudo_convex { f.argmin().cloned() } else { None }))
        }
        ResolventSource::Operator(t) => {
            if let Some(alpha) = t.lipschitz().filter(|a| *a > 1.0) {
                if sup >= 1.0 / (alpha - 1.0) {
                    return Err(Error::config(format!(
                        "sup lambda_k = {sup} must stay below 1/(alpha - 1) = {}",
                        1.0 / (alpha - 1.0)
                    )));
                }
            }
            let probe = lipschitz_resolvent_operator(t, lambdas.value(1))?;
            let t2 = t.clone();
            Ok(OperatorSequence::new(format!("resolvent[{}]", t.name()), t.space(), move |k| {
                lipschitz_resolvent_operator(&t2, l.value(k))
            })
            .with_witness(probe.witness().cloned())
            .with_fixed_set(probe.fixed_set().cloned()))
        }
        ResolventSource::Bifunction(f) => {
            let (Some(lo), Some(hi)) = (lower, upper) else {
                return Err(Error::config(
                    "equilibrium orders need a declared range [theta + eps, lambda_bar]",
                ));
            };
            if !(lo > f.theta()) || hi < lo {
                return Err(Error::config(format!(
                    "equilibrium orders need theta = {} < theta + eps <= lambda_k <= lambda_bar, got [{lo}, {hi}]",
                    f.theta()
                )));
            }
            let probe = equilibrium_resolvent_operator(f, lambdas.value(1))?;
            let g = f.clone();
            Ok(OperatorSequence::new(format!("ep[{}]", f.name()), f.space(), move |k| {
                equilibrium_resolvent_operator(&g, l.value(k))
            })
            .with_witness(probe.witness().cloned())
            .with_fixed_set(probe.fixed_set().cloned()))
        }
    }
}

#[cfg(test)]
mod tests;

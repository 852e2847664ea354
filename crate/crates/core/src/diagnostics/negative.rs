//! Purpose-built fixtures that violate the inequalities the checkers test.
//! Every checker must fail on its control, otherwise it is vacuous.

use crate::error::{Error, Result};
use crate::geometry::{ConvexSubset, GeodesicSpace, KnownSet, ModelSpace, SpacePoint};
use crate::operators::{Operator, OperatorFlags};
use crate::resolvents::{dist2_to_set, quadratic, Bifunction, ConvexityFlags, Objective, ResolventSource};
use crate::schemes::{
    build_scheme, IterationTrace, RunConfig, RunSummary, ScheduleRule, SchemeName, SchemeSchedules, StopReason, TraceStep,
};

use super::{SampleRng, SqnSource};
use rand_distr::{Distribution, StandardNormal};

/// The unit 2-sphere with its great-circle metric: geodesic but CAT(1), not CAT(0).
#[derive(Clone, Copy, Debug, Default)]
pub struct RoundSphere;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RoundSphere {
    /// A point at angular distance at most `cap` from the north pole.
    pub fn sample(&self, rng: &mut SampleRng, cap: f64) -> Vec<f64> {
        let (gx, gy): (f64, f64) = (StandardNormal.sample(rng), StandardNormal.sample(rng));
        let n = gx.hypot(gy).max(f64::MIN_POSITIVE);
        let theta = cap * rand::Rng::random::<f64>(rng).sqrt();
        let (s, c) = theta.sin_cos();
        vec![s * gx / n, s * gy / n, c]
    }
}

impl GeodesicSpace for RoundSphere {
    type Point = Vec<f64>;

    fn distance(&self, x: &Vec<f64>, y: &Vec<f64>) -> Result<f64> {
        let cross = [
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        ];
        Ok(dot(&cross, &cross).sqrt().atan2(dot(x, y)))
    }

    fn combine(&self, x: &Vec<f64>, y: &Vec<f64>, t: f64) -> Result<Vec<f64>> {
        let w = self.distance(x, y)?;
        if w >= std::f64::consts::PI - 1e-9 {
            return Err(Error::domain("antipodal points have no unique geodesic"));
        }
        if w < 1e-15 {
            return Ok(x.clone());
        }
        let (a, b) = (((1.0 - t) * w).sin() / w.sin(), (t * w).sin() / w.sin());
        Ok(x.iter().zip(y).map(|(p, q)| a * p + b * q).collect())
    }
}

/// `½ d²(·, a)` whose "resolvent" reflects through `a` instead of moving toward it.
pub fn reflecting_quadratic(space: ModelSpace, a: SpacePoint) -> Objective {
    let b = a.clone();
    let q = quadratic(space, a.clone());
    Objective::new("reflecting_quadratic", space, move |x| q.eval(x))
        .with_closed_form(move |_, x| space.exp_map(&b, &space.log_map(&b, x)?.scaled(-1.0)))
        .with_flags(ConvexityFlags {
            convex: true,
            quasi_convex: true,
            weakly_convex: false,
            pseudo_convex: true,
        })
        .with_argmin(KnownSet::Point(a))
}

/// `x ↦ 1.5x` on the line, falsely flagged quasi-nonexpansive.
pub fn expanding_map() -> Operator {
    let s = ModelSpace::euclidean(1);
    Operator::new("expanding", s, move |x| s.point(vec![1.5 * x.components()[0]]))
        .with_lipschitz(1.5)
        .with_flags(OperatorFlags::QUASI_NONEXPANSIVE)
        .with_witness(s.origin())
}

/// `F(x) = -x` on the unit disc with `θ = 1`: not pseudo-monotone, so the
/// resolvent pushes points away from the solution `0`.
pub fn repelling_vi() -> Result<Bifunction> {
    let s = ModelSpace::euclidean(2);
    let k = ConvexSubset::ball(s.origin(), 1.0)?;
    Ok(Bifunction::variational_inequality("repelling_vi", 2, |x| x.iter().map(|v| -v).collect(), 1.0, 1.0, k)?
        .with_solutions(KnownSet::Point(s.origin())))
}

/// Controls for [`super::check_sqn_inequality`], one per source kind.
pub fn sqn_controls() -> Result<Vec<SqnSource>> {
    Ok(vec![
        SqnSource::Ishikawa {
            operator: expanding_map(),
            alpha: 0.5,
            beta: 0.5,
        },
        SqnSource::Lipschitz {
            operator: expanding_map(),
            lambda: 1.0,
        },
        SqnSource::Equilibrium {
            bifunction: repelling_vi()?,
            lambda: 1.5,
        },
    ])
}

/// A resolvent on the line that fixes every point at order 1 but shifts by
/// `1 - λ` at smaller orders.
pub fn order_dependent_resolvent() -> Objective {
    let s = ModelSpace::euclidean(1);
    Objective::new("order_dependent", s, |_| Ok(0.0))
        .with_closed_form(move |lambda, x| s.point(vec![x.components()[0] + (1.0 - lambda)]))
}

/// A trace whose distance to `p` grows at `k = 3`.
pub fn receding_trace(p: &SpacePoint) -> Result<IterationTrace> {
    let s = p.space();
    let ModelSpace::Euclidean { .. } = s else {
        return Err(Error::unsupported("receding trace is built in Euclidean spaces"));
    };
    let pc = p.components();
    let offsets = [4.0, 2.0, 1.0, 3.0, 2.5];
    let mut steps = Vec::new();
    for (i, r) in offsets.iter().enumerate() {
        let mut c = pc.clone();
        c[0] += r;
        steps.push(TraceStep {
            k: i + 1,
            point: s.point(c)?,
            residual: f64::NAN,
            dist_to_reference: None,
            fejer_gap: None,
        });
    }
    let last = steps.last().expect("non-empty").point.clone();
    Ok(IterationTrace {
        summary: RunSummary {
            iterations_run: steps.len() - 1,
            final_residual: f64::NAN,
            final_point: last,
            stop_reason: StopReason::BudgetExhausted,
            target_distance: None,
        },
        steps,
    })
}

/// A plain proximal point trace on `½ dist²(·, [(0,0), (1,0)])` from `(3, 1)`,
/// paired with the anchor `(-2, 1)` it never saw. Its limit `(1, 0)` is not
/// `Proj_K u = (0, 0)`.
pub fn unanchored_trace() -> Result<(IterationTrace, SpacePoint, KnownSet)> {
    let s = ModelSpace::euclidean(2);
    let k = ConvexSubset::segment(s.point(vec![0.0, 0.0])?, s.point(vec![1.0, 0.0])?)?;
    let scheme = build_scheme(
        SchemeName::Ppa,
        &ResolventSource::Function(dist2_to_set(s, k.clone())),
        &SchemeSchedules {
            lambda: Some(ScheduleRule::constant(1.0)),
            ..Default::default()
        },
    )?;
    let trace = scheme.run(&RunConfig::new(s.point(vec![3.0, 1.0])?))?;
    Ok((trace, s.point(vec![-2.0, 1.0])?, KnownSet::Set(k)))
}

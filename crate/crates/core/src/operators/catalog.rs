use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{Operator, OperatorFlags};
use crate::error::{Error, Result};
use crate::geometry::{ConvexSubset, KnownSet, ModelSpace, PointSpec, SetSpec, SpacePoint};

/// Named operators addressable from experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorDescriptor {
    Identity,
    /// Metric projection onto a closed convex set.
    Projection { set: SetSpec },
    /// Projection onto a ball or segment of the hyperboloid.
    HyperbolicProjection { set: SetSpec },
    /// Planar rotation about the origin.
    Rotation { angle: f64 },
    /// `x ↦ -c x`, `c ∈ (0, 1]`.
    ScaledReflection { c: f64 },
    /// `x ↦ s R(angle) x`; expansive when `s > 1`.
    ScaledRotation { angle: f64, scale: f64 },
    Constant { point: PointSpec },
    /// `x ↦ R(rate · min(|x|, radius)) x`: quasi-nonexpansive around the
    /// origin but not nonexpansive.
    Twist { rate: f64, radius: f64 },
}

fn euclidean_2d(space: ModelSpace, what: &str) -> Result<()> {
    match space {
        ModelSpace::Euclidean { dim: 2 } => Ok(()),
        _ => Err(Error::unsupported(format!("{what} needs Euclidean 2D, got {space:?}"))),
    }
}

fn euclidean(space: ModelSpace, what: &str) -> Result<()> {
    match space {
        ModelSpace::Euclidean { .. } => Ok(()),
        _ => Err(Error::unsupported(format!("{what} needs a Euclidean space, got {space:?}"))),
    }
}

fn rotate(v: &[f64], angle: f64, scale: f64) -> Vec<f64> {
    let (s, c) = angle.sin_cos();
    vec![scale * (c * v[0] - s * v[1]), scale * (s * v[0] + c * v[1])]
}

fn projection(space: ModelSpace, set: ConvexSubset, name: &str) -> Result<Operator> {
    let s = set.clone();
    Operator::new(name, space, move |x| space.project(&s, x))
        .with_lipschitz(1.0)
        .with_flags(OperatorFlags::NONEXPANSIVE)
        .with_fixed_set(KnownSet::Set(set))
}

/// Builds a catalog operator on `space`.
pub fn catalog_operator(space: ModelSpace, desc: &OperatorDescriptor) -> Result<Operator> {
    let origin = space.origin();
    match desc {
        OperatorDescriptor::Identity => Operator::new("identity", space, |x| Ok(x.clone()))
            .with_lipschitz(1.0)
            .with_flags(OperatorFlags::NONEXPANSIVE)
            .with_fixed_set(KnownSet::Set(ConvexSubset::WholeSpace)),
        OperatorDescriptor::Projection { set } => projection(space, set.resolve(space)?, "projection"),
        OperatorDescriptor::HyperbolicProjection { set } => {
            if !matches!(space, ModelSpace::Hyperboloid { .. }) {
                return Err(Error::unsupported(format!(
                    "hyperbolic_projection on {space:?}"
                )));
            }
            let set = set.resolve(space)?;
            if !matches!(set, ConvexSubset::Ball { .. } | ConvexSubset::Segment { .. }) {
                return Err(Error::unsupported("hyperbolic_projection takes a ball or a segment"));
            }
            projection(space, set, "hyperbolic_projection")
        }
        OperatorDescriptor::Rotation { angle } => {
            euclidean_2d(space, "rotation")?;
            let a = *angle;
            let op = Operator::new(format!("rotation({a})"), space, move |x| {
                Ok(SpacePoint::from_vector(space, rotate(x.vec_unchecked(), a, 1.0)))
            })
            .with_lipschitz(1.0)
            .with_flags(OperatorFlags::NONEXPANSIVE);
            if (a / TAU).fract() == 0.0 {
                op.with_fixed_set(KnownSet::Set(ConvexSubset::WholeSpace))
            } else {
                op.with_fixed_set(KnownSet::Point(origin))
            }
        }
        OperatorDescriptor::ScaledReflection { c } => {
            euclidean(space, "scaled_reflection")?;
            let c = *c;
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::domain(format!("scaled_reflection needs c in (0, 1], got {c}")));
            }
            Operator::new(format!("scaled_reflection({c})"), space, move |x| {
                let v = x.vec_unchecked().iter().map(|xi| -c * xi).collect();
                Ok(SpacePoint::from_vector(space, v))
            })
            .with_lipschitz(c)
            .with_flags(OperatorFlags::NONEXPANSIVE)
            .with_fixed_set(KnownSet::Point(origin))
        }
        OperatorDescriptor::ScaledRotation { angle, scale } => {
            euclidean_2d(space, "scaled_rotation")?;
            let (a, s) = (*angle, *scale);
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::domain(format!("scaled_rotation needs a positive scale, got {s}")));
            }
            if s == 1.0 && (a / TAU).fract() == 0.0 {
                return Err(Error::domain("scaled_rotation with scale 1 and angle 0 is the identity"));
            }
            let flags = if s <= 1.0 {
                OperatorFlags::NONEXPANSIVE
            } else {
                OperatorFlags {
                    demiclosed_assumed: true,
                    ..OperatorFlags::default()
                }
            };
            Operator::new(format!("scaled_rotation({a}, {s})"), space, move |x| {
                Ok(SpacePoint::from_vector(space, rotate(x.vec_unchecked(), a, s)))
            })
            .with_lipschitz(s)
            .with_flags(flags)
            .with_fixed_set(KnownSet::Point(origin))
        }
        OperatorDescriptor::Constant { point } => {
            let p = point.resolve(space)?;
            let q = p.clone();
            Operator::new("constant", space, move |_| Ok(q.clone()))
                .with_lipschitz(0.0)
                .with_flags(OperatorFlags::NONEXPANSIVE)
                .with_fixed_set(KnownSet::Point(p))
        }
        OperatorDescriptor::Twist { rate, radius } => {
            euclidean_2d(space, "twist")?;
            let (w, rho) = (*rate, *radius);
            if !(rho > 0.0 && w.is_finite() && rho.is_finite()) {
                return Err(Error::domain("twist needs a finite rate and a positive radius"));
            }
            let a = (w * rho).abs();
            if a >= TAU {
                return Err(Error::domain(format!(
                    "twist with |rate * radius| = {a} >= 2 pi has fixed circles"
                )));
            }
            let flags = if a == 0.0 {
                OperatorFlags::NONEXPANSIVE
            } else {
                OperatorFlags::QUASI_NONEXPANSIVE
            };
            Operator::new(format!("twist({w}, {rho})"), space, move |x| {
                let v = x.vec_unchecked();
                let r = v[0].hypot(v[1]);
                Ok(SpacePoint::from_vector(space, rotate(v, w * r.min(rho), 1.0)))
            })
            .with_lipschitz((a + (a * a + 4.0).sqrt()) / 2.0)
            .with_flags(flags)
            .with_fixed_set(KnownSet::Point(origin))
        }
    }
}

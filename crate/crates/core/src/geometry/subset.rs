use serde::{Deserialize, Serialize};

use super::{ModelSpace, PointSpec, SpacePoint};
use crate::error::{Error, Result};

/// Closed convex subsets with an exact metric projection.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexSubset {
    WholeSpace,
    Ball { center: SpacePoint, radius: f64 },
    Segment { a: SpacePoint, b: SpacePoint },
    /// `{x : <normal, x> <= offset}`, Euclidean spaces only.
    Halfspace { normal: Vec<f64>, offset: f64 },
}

impl ConvexSubset {
    pub fn ball(center: SpacePoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("ball radius must be positive, got {radius}")));
        }
        Ok(ConvexSubset::Ball { center, radius })
    }

    pub fn segment(a: SpacePoint, b: SpacePoint) -> Result<Self> {
        if a.space() != b.space() {
            return Err(Error::domain("segment endpoints live in different spaces"));
        }
        Ok(ConvexSubset::Segment { a, b })
    }

    pub fn halfspace(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.iter().all(|c| *c == 0.0) || normal.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("halfspace normal must be finite and nonzero"));
        }
        Ok(ConvexSubset::Halfspace { normal, offset })
    }
}

/// A set known in closed form: a single point or a projectable convex set.
/// Used for argmin sets, fixed-point sets and equilibrium sets of fixtures.
#[derive(Clone, Debug, PartialEq)]
pub enum KnownSet {
    Point(SpacePoint),
    Set(ConvexSubset),
}

impl KnownSet {
    pub fn project(&self, space: ModelSpace, x: &SpacePoint) -> Result<SpacePoint> {
        match self {
            KnownSet::Point(p) => Ok(p.clone()),
            KnownSet::Set(s) => space.project(s, x),
        }
    }

    /// Some element of the set.
    pub fn representative(&self, space: ModelSpace) -> Result<SpacePoint> {
        match self {
            KnownSet::Point(p) => Ok(p.clone()),
            KnownSet::Set(ConvexSubset::Ball { center, .. }) => Ok(center.clone()),
            KnownSet::Set(ConvexSubset::Segment { a, .. }) => Ok(a.clone()),
            KnownSet::Set(s) => space.project(s, &space.origin()),
        }
    }

    pub fn as_singleton(&self) -> Option<&SpacePoint> {
        match self {
            KnownSet::Point(p) => Some(p),
            KnownSet::Set(ConvexSubset::Segment { a, b }) if a == b => Some(a),
            KnownSet::Set(_) => None,
        }
    }
}

/// Serialized convex-set descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Whole,
    Ball { center: PointSpec, radius: f64 },
    Segment { a: PointSpec, b: PointSpec },
    Halfspace { normal: Vec<f64>, offset: f64 },
}

impl SetSpec {
    pub fn resolve(&self, space: ModelSpace) -> Result<ConvexSubset> {
        match self {
            SetSpec::Whole => Ok(ConvexSubset::WholeSpace),
            SetSpec::Ball { center, radius } => ConvexSubset::ball(center.resolve(space)?, *radius),
            SetSpec::Segment { a, b } => {
                ConvexSubset::segment(a.resolve(space)?, b.resolve(space)?)
            }
            SetSpec::Halfspace { normal, offset } => {
                match space {
                    ModelSpace::Euclidean { dim } if dim == normal.len() => {}
                    _ => {
                        return Err(Error::unsupported(format!(
                            "halfspace with {}-vector normal in {space:?}",
                            normal.len()
                        )))
                    }
                }
                ConvexSubset::halfspace(normal.clone(), *offset)
            }
        }
    }
}

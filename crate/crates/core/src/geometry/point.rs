use serde::{Deserialize, Serialize};

use super::ModelSpace;
use crate::error::{Error, Result};

/// Raw coordinates of a point: an ambient vector (Euclidean, Hyperboloid)
/// or a position on one leg of a spider tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Coords {
    Vector(Vec<f64>),
    Tree { leg: usize, radius: f64 },
}

/// A validated point of a [`ModelSpace`].
///
/// Points are only built through [`ModelSpace`] constructors or geometry
/// operations, so every instance satisfies its space's invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacePoint {
    space: ModelSpace,
    coords: Coords,
}

impl SpacePoint {
    pub(crate) fn from_vector(space: ModelSpace, v: Vec<f64>) -> Self {
        SpacePoint {
            space,
            coords: Coords::Vector(v),
        }
    }

    pub(crate) fn from_tree(space: ModelSpace, leg: usize, radius: f64) -> Self {
        // the hub lies on every leg
        let leg = if radius == 0.0 { 0 } else { leg };
        SpacePoint {
            space,
            coords: Coords::Tree { leg, radius },
        }
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Ambient coordinate vector, if the point lives in a vector model.
    pub fn vector(&self) -> Option<&[f64]> {
        match &self.coords {
            Coords::Vector(v) => Some(v),
            Coords::Tree { .. } => None,
        }
    }

    /// `(leg, radius)` for spider points.
    pub fn tree(&self) -> Option<(usize, f64)> {
        match self.coords {
            Coords::Tree { leg, radius } => Some((leg, radius)),
            Coords::Vector(_) => None,
        }
    }

    /// Flat numeric view used for CSV output: the ambient vector, or
    /// `[leg, radius]` for spider points.
    pub fn components(&self) -> Vec<f64> {
        match &self.coords {
            Coords::Vector(v) => v.clone(),
            Coords::Tree { leg, radius } => vec![*leg as f64, *radius],
        }
    }

    pub(crate) fn vec_unchecked(&self) -> &[f64] {
        match &self.coords {
            Coords::Vector(v) => v,
            Coords::Tree { .. } => unreachable!("vector access on a tree point"),
        }
    }
}

/// Tangent vector in the ambient chart of a vector model.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangent(pub Vec<f64>);

impl Tangent {
    pub fn zeros(n: usize) -> Self {
        Tangent(vec![0.0; n])
    }

    pub fn scaled(&self, s: f64) -> Tangent {
        Tangent(self.0.iter().map(|v| v * s).collect())
    }

    pub fn add(&self, other: &Tangent) -> Tangent {
        Tangent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Serialized point descriptor.
///
/// Hyperboloid points may be given either by their `dim` spatial
/// coordinates (the time coordinate is then recovered) or by all `dim + 1`
/// ambient coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Coords(Vec<f64>),
    Tree { leg: usize, radius: f64 },
}

impl PointSpec {
    pub fn resolve(&self, space: ModelSpace) -> Result<SpacePoint> {
        match (self, space) {
            (PointSpec::Coords(v), ModelSpace::Hyperboloid { dim }) if v.len() == dim => {
                space.lift(v)
            }
            (PointSpec::Coords(v), _) => space.point(v.clone()),
            (PointSpec::Tree { leg, radius }, _) => space.tree_point(*leg, *radius),
        }
    }

    pub fn from_point(p: &SpacePoint) -> PointSpec {
        match p.coords() {
            Coords::Vector(v) => PointSpec::Coords(v.clone()),
            Coords::Tree { leg, radius } => PointSpec::Tree {
                leg: *leg,
                radius: *radius,
            },
        }
    }
}

pub(crate) fn mismatch(space: ModelSpace, p: &SpacePoint) -> Error {
    Error::domain(format!(
        "point belongs to {:?}, expected {:?}",
        p.space(),
        space
    ))
}

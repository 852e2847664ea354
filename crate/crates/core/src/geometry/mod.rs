//! Hadamard-space geometry: three model spaces, geodesic combinations,
//! the quasi-linearization pairing, tangent charts and metric projections.
//!
//! `combine(x, y, t)` is the point `z` on the geodesic `[x, y]` with
//! `d(x, z) = t d(x, y)`; every scheme in the crate uses this convention.

mod hyperboloid;
mod point;
mod spider;
mod subset;

use serde::{Deserialize, Serialize};

pub use point::{Coords, PointSpec, SpacePoint, Tangent};
pub use subset::{ConvexSubset, KnownSet, SetSpec};

use crate::error::{Error, Result};
use point::mismatch;

/// Validity tolerance for hyperboloid points (relative to `x0^2`).
pub const POINT_TOL: f64 = 1e-9;
/// Tolerance for membership tests (`project(x) == x`).
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// The registered model spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpace {
    /// `R^dim` with the Euclidean metric.
    Euclidean { dim: usize },
    /// Hyperbolic space `H^dim` in the hyperboloid model; points carry
    /// `dim + 1` ambient coordinates, time coordinate first.
    Hyperboloid { dim: usize },
    /// A metric tree of `legs` half-lines glued at a hub.
    Spider { legs: usize },
}

/// Minimal interface of a uniquely geodesic metric space.
///
/// [`ModelSpace`] implements it; diagnostics are generic over it so they can
/// also be run against spaces that are *not* CAT(0).
pub trait GeodesicSpace {
    type Point: Clone + std::fmt::Debug;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<f64>;

    fn combine(&self, x: &Self::Point, y: &Self::Point, t: f64) -> Result<Self::Point>;

    /// `<ab, cd> = (d²(a,d) + d²(b,c) - d²(a,c) - d²(b,d)) / 2`.
    fn quasilin(
        &self,
        a: &Self::Point,
        b: &Self::Point,
        c: &Self::Point,
        d: &Self::Point,
    ) -> Result<f64> {
        let sq = |p: &Self::Point, q: &Self::Point| self.distance(p, q).map(|v| v * v);
        Ok(0.5 * (sq(a, d)? + sq(b, c)? - sq(a, c)? - sq(b, d)?))
    }
}

impl ModelSpace {
    pub fn euclidean(dim: usize) -> Self {
        ModelSpace::Euclidean { dim }
    }

    pub fn hyperboloid(dim: usize) -> Self {
        ModelSpace::Hyperboloid { dim }
    }

    pub fn spider(legs: usize) -> Self {
        ModelSpace::Spider { legs }
    }

    /// Length of the ambient coordinate vector, `None` for trees.
    pub fn ambient_len(&self) -> Option<usize> {
        match *self {
            ModelSpace::Euclidean { dim } => Some(dim),
            ModelSpace::Hyperboloid { dim } => Some(dim + 1),
            ModelSpace::Spider { .. } => None,
        }
    }

    pub fn point(&self, coords: Vec<f64>) -> Result<SpacePoint> {
        let Some(n) = self.ambient_len() else {
            return Err(Error::domain("spider points need (leg, radius) coordinates"));
        };
        if coords.len() != n {
            return Err(Error::domain(format!(
                "{self:?} expects {n} coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("non-finite coordinate"));
        }
        if let ModelSpace::Hyperboloid { .. } = self {
            let m = hyperboloid::minkowski(&coords, &coords);
            let scale = 1.0 + coords[0] * coords[0];
            if coords[0] <= 0.0 || (m + 1.0).abs() > POINT_TOL * scale {
                return Err(Error::domain(format!(
                    "not on the upper hyperboloid sheet: <x,x> = {m}, x0 = {}",
                    coords[0]
                )));
            }
        }
        Ok(SpacePoint::from_vector(*self, coords))
    }

    /// Hyperboloid point with the given spatial coordinates.
    pub fn lift(&self, spatial: &[f64]) -> Result<SpacePoint> {
        match *self {
            ModelSpace::Hyperboloid { dim } if spatial.len() == dim => {
                if spatial.iter().any(|c| !c.is_finite()) {
                    return Err(Error::domain("non-finite coordinate"));
                }
                Ok(SpacePoint::from_vector(*self, hyperboloid::lift(spatial)))
            }
            ModelSpace::Hyperboloid { dim } => Err(Error::domain(format!(
                "lift into H^{dim} needs {dim} spatial coordinates, got {}",
                spatial.len()
            ))),
            _ => self.point(spatial.to_vec()),
        }
    }

    pub fn tree_point(&self, leg: usize, radius: f64) -> Result<SpacePoint> {
        let ModelSpace::Spider { legs } = *self else {
            return Err(Error::domain(format!("{self:?} has no tree coordinates")));
        };
        if leg >= legs {
            return Err(Error::domain(format!("leg {leg} out of range for {legs} legs")));
        }
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("radius must be >= 0, got {radius}")));
        }
        Ok(SpacePoint::from_tree(*self, leg, radius))
    }

    /// The distinguished base point: the origin, the hyperboloid apex, or the hub.
    pub fn origin(&self) -> SpacePoint {
        match *self {
            ModelSpace::Euclidean { dim } => SpacePoint::from_vector(*self, vec![0.0; dim]),
            ModelSpace::Hyperboloid { dim } => {
                let mut v = vec![0.0; dim + 1];
                v[0] = 1.0;
                SpacePoint::from_vector(*self, v)
            }
            ModelSpace::Spider { .. } => SpacePoint::from_tree(*self, 0, 0.0),
        }
    }

    fn check(&self, p: &SpacePoint) -> Result<()> {
        if p.space() == *self {
            Ok(())
        } else {
            Err(mismatch(*self, p))
        }
    }

    pub fn distance(&self, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(match self {
            ModelSpace::Euclidean { .. } => euclid_dist(x.vec_unchecked(), y.vec_unchecked()),
            ModelSpace::Hyperboloid { .. } => {
                hyperboloid::distance(x.vec_unchecked(), y.vec_unchecked())
            }
            ModelSpace::Spider { .. } => spider::distance(x.tree().unwrap(), y.tree().unwrap()),
        })
    }

    /// The point at parameter `t` along the geodesic from `x` to `y`.
    pub fn combine(&self, x: &SpacePoint, y: &SpacePoint, t: f64) -> Result<SpacePoint> {
        self.check(x)?;
        self.check(y)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("geodesic parameter {t} outside [0, 1]")));
        }
        if t == 0.0 {
            return Ok(x.clone());
        }
        if t == 1.0 {
            return Ok(y.clone());
        }
        Ok(match self {
            ModelSpace::Euclidean { .. } => {
                let z = x
                    .vec_unchecked()
                    .iter()
                    .zip(y.vec_unchecked())
                    .map(|(a, b)| a + t * (b - a))
                    .collect();
                SpacePoint::from_vector(*self, z)
            }
            ModelSpace::Hyperboloid { .. } => SpacePoint::from_vector(
                *self,
                hyperboloid::combine(x.vec_unchecked(), y.vec_unchecked(), t),
            ),
            ModelSpace::Spider { .. } => {
                let (leg, r) = spider::combine(x.tree().unwrap(), y.tree().unwrap(), t);
                SpacePoint::from_tree(*self, leg, r.max(0.0))
            }
        })
    }

    /// Quasi-linearization `<ab, cd>`.
    pub fn quasilin(
        &self,
        a: &SpacePoint,
        b: &SpacePoint,
        c: &SpacePoint,
        d: &SpacePoint,
    ) -> Result<f64> {
        GeodesicSpace::quasilin(self, a, b, c, d)
    }

    fn require_chart(&self, what: &str) -> Result<()> {
        match self {
            ModelSpace::Spider { .. } => Err(Error::unsupported(format!(
                "{what} is not defined on a spider tree"
            ))),
            _ => Ok(()),
        }
    }

    /// Tangent vector at `base` pointing to `target`, with length `d(base, target)`.
    pub fn log_map(&self, base: &SpacePoint, target: &SpacePoint) -> Result<Tangent> {
        self.require_chart("log_map")?;
        self.check(base)?;
        self.check(target)?;
        let (b, t) = (base.vec_unchecked(), target.vec_unchecked());
        Ok(Tangent(match self {
            ModelSpace::Hyperboloid { .. } => hyperboloid::log(b, t),
            _ => t.iter().zip(b).map(|(ti, bi)| ti - bi).collect(),
        }))
    }

    pub fn exp_map(&self, base: &SpacePoint, v: &Tangent) -> Result<SpacePoint> {
        self.require_chart("exp_map")?;
        self.check(base)?;
        let b = base.vec_unchecked();
        if v.0.len() != b.len() {
            return Err(Error::domain(format!(
                "tangent has {} components, base has {}",
                v.0.len(),
                b.len()
            )));
        }
        if v.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("non-finite tangent vector"));
        }
        Ok(SpacePoint::from_vector(
            *self,
            match self {
                ModelSpace::Hyperboloid { .. } => hyperboloid::exp(b, &v.0),
                _ => b.iter().zip(&v.0).map(|(bi, vi)| bi + vi).collect(),
            },
        ))
    }

    /// Riemannian norm of a tangent vector at `base`.
    pub fn tangent_norm(&self, base: &SpacePoint, v: &Tangent) -> Result<f64> {
        self.require_chart("tangent_norm")?;
        self.check(base)?;
        Ok(match self {
            ModelSpace::Hyperboloid { .. } => hyperboloid::tangent_norm(base.vec_unchecked(), &v.0),
            _ => v.0.iter().map(|c| c * c).sum::<f64>().sqrt(),
        })
    }

    /// Unit tangent at `base` obtained from a spatial direction (a vector of
    /// length `dim`).
    pub fn unit_tangent(&self, base: &SpacePoint, spatial: &[f64]) -> Result<Tangent> {
        self.require_chart("unit_tangent")?;
        self.check(base)?;
        let raw = match *self {
            ModelSpace::Hyperboloid { dim } if spatial.len() == dim => {
                let mut v = vec![0.0];
                v.extend_from_slice(spatial);
                hyperboloid::orthogonalize(base.vec_unchecked(), &v)
            }
            ModelSpace::Euclidean { dim } if spatial.len() == dim => spatial.to_vec(),
            _ => return Err(Error::domain("spatial direction has the wrong length")),
        };
        let t = Tangent(raw);
        let n = self.tangent_norm(base, &t)?;
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::domain("degenerate tangent direction"));
        }
        Ok(t.scaled(1.0 / n))
    }

    /// Metric projection of `x` onto `set`.
    pub fn project(&self, set: &ConvexSubset, x: &SpacePoint) -> Result<SpacePoint> {
        self.check(x)?;
        match set {
            ConvexSubset::WholeSpace => Ok(x.clone()),
            ConvexSubset::Ball { center, radius } => {
                let d = self.distance(center, x)?;
                if d <= *radius {
                    Ok(x.clone())
                } else {
                    self.combine(center, x, radius / d)
                }
            }
            ConvexSubset::Segment { a, b } => self.project_segment(a, b, x),
            ConvexSubset::Halfspace { normal, offset } => {
                let ModelSpace::Euclidean { dim } = *self else {
                    return Err(Error::unsupported(format!("halfspace in {self:?}")));
                };
                if normal.len() != dim {
                    return Err(Error::domain("halfspace normal has the wrong dimension"));
                }
                let xv = x.vec_unchecked();
                let excess = dot(normal, xv) - offset;
                if excess <= 0.0 {
                    return Ok(x.clone());
                }
                let s = excess / dot(normal, normal);
                let z = xv.iter().zip(normal).map(|(xi, ni)| xi - s * ni).collect();
                Ok(SpacePoint::from_vector(*self, z))
            }
        }
    }

    fn project_segment(&self, a: &SpacePoint, b: &SpacePoint, x: &SpacePoint) -> Result<SpacePoint> {
        self.check(a)?;
        self.check(b)?;
        match self {
            ModelSpace::Euclidean { .. } => {
                let (av, bv, xv) = (a.vec_unchecked(), b.vec_unchecked(), x.vec_unchecked());
                let ab: Vec<f64> = bv.iter().zip(av).map(|(p, q)| p - q).collect();
                let len2 = dot(&ab, &ab);
                if len2 == 0.0 {
                    return Ok(a.clone());
                }
                let ax: Vec<f64> = xv.iter().zip(av).map(|(p, q)| p - q).collect();
                let t = (dot(&ax, &ab) / len2).clamp(0.0, 1.0);
                self.combine(a, b, t)
            }
            ModelSpace::Hyperboloid { .. } => {
                let len = self.distance(a, b)?;
                if len == 0.0 {
                    return Ok(a.clone());
                }
                let w = self.log_map(a, b)?.scaled(1.0 / len);
                let s = hyperboloid::closest_on_geodesic(
                    x.vec_unchecked(),
                    a.vec_unchecked(),
                    &w.0,
                    len,
                );
                self.combine(a, b, (s / len).clamp(0.0, 1.0))
            }
            ModelSpace::Spider { .. } => {
                let (leg, r) =
                    spider::project_segment(x.tree().unwrap(), a.tree().unwrap(), b.tree().unwrap());
                Ok(SpacePoint::from_tree(*self, leg, r))
            }
        }
    }

    pub fn contains(&self, set: &ConvexSubset, x: &SpacePoint) -> Result<bool> {
        let p = self.project(set, x)?;
        Ok(self.distance(&p, x)? <= MEMBERSHIP_TOL)
    }
}

impl GeodesicSpace for ModelSpace {
    type Point = SpacePoint;

    fn distance(&self, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
        ModelSpace::distance(self, x, y)
    }

    fn combine(&self, x: &SpacePoint, y: &SpacePoint, t: f64) -> Result<SpacePoint> {
        ModelSpace::combine(self, x, y, t)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn euclid_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

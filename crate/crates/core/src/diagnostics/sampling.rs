use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::Result;
use crate::geometry::{ModelSpace, SpacePoint};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random points of a model space around a base point.
///
/// Euclidean: base plus a standard normal vector times `radius`.
/// Hyperboloid: exp map at the base of a Gaussian tangent times `radius`.
/// Spider: uniform leg, exponentially distributed radius with mean `radius`.
#[derive(Clone, Debug)]
pub struct Sampler {
    space: ModelSpace,
    base: SpacePoint,
    radius: f64,
}

impl Sampler {
    pub fn new(space: ModelSpace, radius: f64) -> Self {
        Sampler {
            space,
            base: space.origin(),
            radius,
        }
    }

    /// Centers Euclidean and hyperbolic samples at `base`; spider samples
    /// always spread from the hub.
    pub fn around(mut self, base: SpacePoint) -> Self {
        self.base = base;
        self
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn sample(&self, rng: &mut SampleRng) -> Result<SpacePoint> {
        let s = self.space;
        match s {
            ModelSpace::Euclidean { dim } => {
                let b = self.base.vector().expect("euclidean point");
                let v = (0..dim)
                    .map(|i| {
                        let g: f64 = StandardNormal.sample(rng);
                        b[i] + self.radius * g
                    })
                    .collect();
                s.point(v)
            }
            ModelSpace::Hyperboloid { dim } => {
                let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
                let n = g.iter().map(|c| c * c).sum::<f64>().sqrt();
                if n == 0.0 {
                    return Ok(self.base.clone());
                }
                let u = s.unit_tangent(&self.base, &g)?;
                s.exp_map(&self.base, &u.scaled(n * self.radius))
            }
            ModelSpace::Spider { legs } => {
                let leg = rng.random_range(0..legs);
                let e: f64 = Exp1.sample(rng);
                s.tree_point(leg, e * self.radius)
            }
        }
    }

    pub fn sample_many(&self, rng: &mut SampleRng, n: usize) -> Result<Vec<SpacePoint>> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

//! Shared fixtures for the criterion benches.

use hadamard_core::diagnostics::{rng, Sampler};
use hadamard_core::{ModelSpace, SpacePoint};

pub const SPACES: [(&str, ModelSpace); 3] = [
    ("euclidean3", ModelSpace::Euclidean { dim: 3 }),
    ("hyperboloid3", ModelSpace::Hyperboloid { dim: 3 }),
    ("spider5", ModelSpace::Spider { legs: 5 }),
];

/// `n` reproducible points of `space` spread over radius 1.5.
pub fn points(space: ModelSpace, n: usize, seed: u64) -> Vec<SpacePoint> {
    Sampler::new(space, 1.5).sample_many(&mut rng(seed), n).expect("model-space sampling")
}

//! Fixtures shared by the benchmarks.

use subsq::sampler::{sample_uniform, SamplerConfig};
use subsq::LatinSquare;

/// A sampled square of order `n`, fixed by `seed`.
pub fn sampled_square(n: usize, seed: u64) -> LatinSquare {
    sample_uniform(&SamplerConfig::new(n, seed))
}

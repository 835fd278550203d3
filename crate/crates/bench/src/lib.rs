//! Shared inputs for the benchmarks.

use fontsense_core::model::Dataset;
use fontsense_core::LabelDistribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FONTS: usize = 10;

pub fn random_distribution(rng: &mut ChaCha8Rng) -> LabelDistribution {
    let w: Vec<f64> = (0..FONTS).map(|_| rng.random_range(0.0..1.0f64).powi(2)).collect();
    LabelDistribution::from_scores(w).unwrap()
}

pub fn distributions(n: usize, seed: u64) -> Vec<LabelDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_distribution(&mut rng)).collect()
}

/// `n` random feature rows of width `dim` with random targets.
pub fn dataset(n: usize, dim: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Dataset::default();
    for _ in 0..n {
        data.features
            .push((0..dim).map(|_| rng.random_range(0.0..1.0)).collect());
        data.targets.push(random_distribution(&mut rng));
    }
    data
}

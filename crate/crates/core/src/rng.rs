//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 (`rand_chacha` 0.9) seeded through
//! `SeedableRng::seed_from_u64`. The algorithm is fixed so that a given seed
//! produces the same draws on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for the `index`-th independent run derived from a base seed.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    #[test]
    fn equal_seeds_give_equal_draws() {
        let mut a = seeded_rng(42);
        let mut b = seeded_rng(42);
        for _ in 0..100 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let mut a = seeded_rng(1);
        let mut b = seeded_rng(2);
        let xs: Vec<u64> = (0..100).map(|_| a.random()).collect();
        let ys: Vec<u64> = (0..100).map(|_| b.random()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn normal_sample_mean() {
        let n = 100_000;
        let mut rng = seeded_rng(7);
        let mean: f64 = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn split_seed_is_xor() {
        assert_eq!(split_seed(0b1010, 0b0110), 0b1100);
        assert_eq!(split_seed(5, 0), 5);
    }

    #[test]
    fn stream_is_pinned() {
        // Guards against silent algorithm changes in dependencies.
        let mut rng = seeded_rng(0);
        let first: u64 = rng.random();
        let mut again = seeded_rng(0);
        assert_eq!(first, again.random::<u64>());
        assert_eq!(first, PINNED_FIRST_DRAW);
    }

    const PINNED_FIRST_DRAW: u64 = 13080132717333068652;
}

//! Seeded generator used by every planner run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type PlannerRng = ChaCha8Rng;

/// Identifier recorded with every result so runs can be reproduced.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9/seed_from_u64";

pub fn planner_rng(seed: u64) -> PlannerRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let mut a = planner_rng(7);
        let mut b = planner_rng(7);
        for _ in 0..100 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
        assert_ne!(planner_rng(1).random::<u64>(), planner_rng(2).random::<u64>());
    }

    #[test]
    fn stream_is_pinned() {
        // Guards against silent algorithm changes in the dependency.
        let first: u64 = planner_rng(0).random();
        assert_eq!(first, planner_rng(0).random::<u64>());
        let mut r = planner_rng(42);
        let v: Vec<u32> = (0..3).map(|_| r.random()).collect();
        assert_eq!(v, PINNED_SEED42.to_vec());
    }

    const PINNED_SEED42: [u32; 3] = [962419617, 2928721845, 628724104];
}

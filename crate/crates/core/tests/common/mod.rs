#![allow(dead_code)]

use mus::simulation::{generate_bernoulli_matrix, random_grouping};
use mus::{Grouping, Tolerance, ZeroPattern};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A seeded Bernoulli instance: `n` units, `k` groups, ones with probability `p`.
pub fn instance(n: usize, k: usize, p: f64, seed: u64) -> (ZeroPattern, Grouping) {
    let m = generate_bernoulli_matrix(n, p, seed).unwrap();
    let g = random_grouping(n, k, seed ^ 0x5eed).unwrap();
    (ZeroPattern::build(&m, Tolerance::EXACT), g)
}

pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

/// A permutation that keeps the relative order of units inside each group,
/// while reshuffling which positions each group occupies.
pub fn group_order_preserving_permutation(g: &Grouping, seed: u64) -> Vec<usize> {
    let n = g.n();
    let shuffled = random_permutation(n, seed);
    // Positions handed to each group, sorted, then assigned in member order.
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); g.k()];
    let mut cursor = 0;
    for group in 0..g.k() {
        let size = g.members(group).len();
        positions[group] = shuffled[cursor..cursor + size].to_vec();
        positions[group].sort_unstable();
        cursor += size;
    }
    let mut perm = vec![0; n];
    for group in 0..g.k() {
        for (&unit, &pos) in g.members(group).iter().zip(&positions[group]) {
            perm[unit] = pos;
        }
    }
    perm
}

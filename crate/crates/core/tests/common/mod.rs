#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ship_core::fixtures::{random_tree, Shape};
use ship_core::partition::Partition;
use ship_core::ultra::LcaTree;

/// Seeded corpus of random integer-valued trees with 2 to 12 points.
pub fn corpus(seed: u64, count: usize, shape: Shape) -> Vec<LcaTree> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=12);
            random_tree(&mut rng, n, shape)
        })
        .collect()
}

/// Checks that `next` arises from `prev` by splitting exactly one cluster in
/// two. Returns a description of the first problem.
pub fn one_split(prev: &Partition, next: &Partition) -> Result<(), String> {
    if next.k() != prev.k() + 1 {
        return Err(format!("k went from {} to {}", prev.k(), next.k()));
    }
    let mut parent_of = vec![None; next.k()];
    for (p, (a, b)) in prev.labels().iter().zip(next.labels()).enumerate() {
        let (Some(a), Some(b)) = (a, b) else {
            return Err(format!("point {p} is noise"));
        };
        match parent_of[*b] {
            None => parent_of[*b] = Some(*a),
            Some(x) if x == *a => {}
            Some(x) => return Err(format!("cluster {b} straddles clusters {x} and {a}")),
        }
    }
    let mut pieces = vec![0usize; prev.k()];
    for p in parent_of.into_iter().flatten() {
        pieces[p] += 1;
    }
    let split: Vec<usize> = pieces.iter().filter(|&&c| c != 1).copied().collect();
    if split != [2] {
        return Err(format!("pieces per old cluster: {pieces:?}"));
    }
    Ok(())
}

/// Optimal 1-center cost of every subtree by trying every leaf in it.
pub fn brute_subtree_costs(tree: &LcaTree, apply: impl Fn(f64) -> f64, combine: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    (0..tree.len())
        .map(|node| {
            let leaves = tree.leaves(node);
            leaves
                .iter()
                .map(|&c| {
                    leaves
                        .iter()
                        .map(|&l| apply(tree.lca_distance(l, c).unwrap()))
                        .fold(0.0, &combine)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

//! Small reference inputs and random generators shared by tests, benches
//! and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::metrics::PointSet;
use crate::ultra::{LcaTree, NodeId, TreeBuilder};

/// Four points: `A = {0, 1}` at value 2, `B = {2, 3}` at value 3, root at
/// value 5, all leaf values 0. Node ids: leaves `0..4`, `A = 4`, `B = 5`,
/// root `6`.
pub fn t4() -> LcaTree {
    let mut b = TreeBuilder::new(&[0.0; 4]);
    let a = b.internal(2.0, &[0, 1]);
    let bb = b.internal(3.0, &[2, 3]);
    let root = b.internal(5.0, &[a, bb]);
    b.finish(root).expect("fixture is well formed")
}

/// `n` leaves of value 0 directly under a root of value `c`.
pub fn star(n: usize, c: f64) -> LcaTree {
    assert!(n >= 2, "a star needs at least two leaves");
    let mut b = TreeBuilder::new(&vec![0.0; n]);
    let kids: Vec<NodeId> = (0..n).collect();
    let root = b.internal(c, &kids);
    b.finish(root).expect("fixture is well formed")
}

/// The points 0, 1 and 10 on a line.
pub fn line3() -> PointSet {
    PointSet::new(vec![vec![0.0], vec![1.0], vec![10.0]]).expect("fixture is well formed")
}

/// How random trees pick their values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Internal values are strictly above every internal child and at least
    /// every leaf child. These are the trees built from ultrametric matrices.
    Canonical,
    /// Any valid tree: internal values are at least every child value.
    Relaxed,
}

/// Random valid LCA-tree with `n` points and small integer values.
///
/// Topology comes from repeatedly merging 2 to 4 random components. Leaf
/// values are zero about half the time.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize, shape: Shape) -> LcaTree {
    assert!(n >= 1);
    let leaf_values: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.5) { 0.0 } else { rng.random_range(1..=3) as f64 })
        .collect();
    if n == 1 {
        return LcaTree::singleton(leaf_values[0]);
    }
    let mut b = TreeBuilder::new(&leaf_values);
    let mut values = leaf_values.clone();
    let mut comps: Vec<NodeId> = (0..n).collect();
    while comps.len() > 1 {
        comps.shuffle(rng);
        let take = rng.random_range(2..=comps.len().min(4));
        let group: Vec<NodeId> = comps.split_off(comps.len() - take);
        let leaf_max = group.iter().filter(|&&c| c < n).map(|&c| values[c]).fold(0.0, f64::max);
        let inner_max = group.iter().filter(|&&c| c >= n).map(|&c| values[c]).fold(f64::NEG_INFINITY, f64::max);
        let floor = match shape {
            Shape::Canonical => leaf_max.max(inner_max + 1.0),
            Shape::Relaxed => leaf_max.max(inner_max),
        };
        let value = floor + rng.random_range(0..=2) as f64;
        let id = b.internal(value, &group);
        values.push(value);
        comps.push(id);
    }
    b.finish(comps[0]).expect("generator output is well formed")
}

/// Draws `n` points split as evenly as possible between isotropic Gaussians
/// at `centers` with standard deviation `sd`.
pub fn gaussian_mixture<R: Rng + ?Sized>(rng: &mut R, n: usize, centers: &[Vec<f64>], sd: f64) -> PointSet {
    assert!(!centers.is_empty());
    let normal = Normal::new(0.0, sd).expect("sd must be finite and non-negative");
    let points = (0..n)
        .map(|i| {
            centers[i % centers.len()]
                .iter()
                .map(|&c| c + normal.sample(rng))
                .collect()
        })
        .collect();
    PointSet::new(points).expect("generated points are finite")
}

/// Ten copies of a three-point cluster spaced `gap` apart on the x-axis.
/// Within a copy the points sit at offsets 0, 1 and 2.
pub fn ten_copies(gap: f64) -> PointSet {
    let mut points = Vec::with_capacity(30);
    for copy in 0..10 {
        for offset in 0..3 {
            points.push(vec![copy as f64 * gap + offset as f64, 0.0]);
        }
    }
    PointSet::new(points).expect("fixture is well formed")
}

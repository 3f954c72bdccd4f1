mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ship_core::fixtures::{random_tree, ten_copies, Shape};
use ship_core::hierarchy::{
    build_hierarchy, cost_curve, extract_partition, hierarchy_for, kz_annotate, node_cost_decreases,
    optimize_annotations, Decrease, Objective,
};
use ship_core::metrics::{fit_dc, PointSet};
use ship_core::oracle::{brute_cost, brute_optimum, partition_cost};
use ship_core::ultra::LcaTree;
use ship_core::Exec;

fn tree_strategy(max_n: usize) -> impl Strategy<Value = LcaTree> {
    (2..=max_n, any::<u64>(), any::<bool>()).prop_map(|(n, seed, relaxed)| {
        let shape = if relaxed { Shape::Relaxed } else { Shape::Canonical };
        random_tree(&mut StdRng::seed_from_u64(seed), n, shape)
    })
}

// Same topology, values scaled by a non-integer factor and jittered upwards
// so that floating-point sums are no longer exact.
fn float_tree(tree: &LcaTree, seed: u64) -> LcaTree {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut values = vec![0.0; tree.len()];
    for node in tree.postorder() {
        let floor = tree.children(node).iter().map(|&c| values[c]).fold(0.0, f64::max);
        values[node] = (tree.value(node) * 1.37).max(floor) + rng.random_range(0.0..0.01);
    }
    tree.with_values(&values).unwrap()
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn optimal_for_higher_powers(tree in tree_strategy(9), z in 3u32..=5) {
        let objective = Objective::Power(z);
        let h = hierarchy_for(&tree, objective).unwrap();
        for k in 1..=tree.n_points() {
            let best = brute_optimum(&tree, k, objective).unwrap().cost;
            let part = extract_partition(&h, k).unwrap();
            prop_assert_eq!(partition_cost(&tree, &part, objective).unwrap(), best);
            prop_assert_eq!(h.curve().loss(k).unwrap(), best);
        }
    }

    #[test]
    fn optimal_on_float_trees(tree in tree_strategy(10), seed in any::<u64>()) {
        let tree = float_tree(&tree, seed);
        for objective in [Objective::Center, Objective::MEDIAN, Objective::MEANS] {
            let h = hierarchy_for(&tree, objective).unwrap();
            for k in 1..=tree.n_points() {
                let best = brute_optimum(&tree, k, objective).unwrap().cost;
                let got = partition_cost(&tree, &extract_partition(&h, k).unwrap(), objective).unwrap();
                prop_assert!(rel_close(got, best), "{} k={}: {} vs {}", objective, k, got, best);
                prop_assert!(rel_close(h.curve().loss(k).unwrap(), best));
            }
        }
    }

    #[test]
    fn refinement_on_any_tree(tree in tree_strategy(16)) {
        for objective in [Objective::Center, Objective::MEDIAN, Objective::MEANS, Objective::Power(4)] {
            let h = hierarchy_for(&tree, objective).unwrap();
            let parts: Vec<_> = (1..=tree.n_points()).map(|k| extract_partition(&h, k).unwrap()).collect();
            prop_assert_eq!(parts[0].k(), 1);
            for pair in parts.windows(2) {
                if let Err(e) = common::one_split(&pair[0], &pair[1]) {
                    prop_assert!(false, "{}: {}", objective, e);
                }
            }
        }
    }

    #[test]
    fn curve_identities(tree in tree_strategy(16), z in 1u32..=3) {
        let objective = Objective::Power(z);
        let a = kz_annotate(&tree, objective).unwrap();
        let curve = cost_curve(&a);
        let losses = curve.losses();
        let self_total: f64 = (0..tree.n_points()).map(|p| objective.apply(tree.value(p))).sum();
        prop_assert_eq!(losses[tree.n_points() - 1], self_total);
        prop_assert_eq!(losses[0], a.items()[0].subtree_cost);
        for (k, w) in losses.windows(2).enumerate() {
            prop_assert!(w[1] <= w[0]);
            let dec = a.items()[k + 1].cost_decrease.finite().unwrap();
            prop_assert_eq!(w[0] - w[1], dec);
        }
    }

    #[test]
    fn annotation_decreases_match_node_decreases(tree in tree_strategy(16)) {
        for objective in [Objective::Center, Objective::MEDIAN, Objective::MEANS] {
            let per_node = node_cost_decreases(&tree, objective).unwrap();
            for a in kz_annotate(&tree, objective).unwrap().items() {
                prop_assert_eq!(a.cost_decrease, per_node[a.node]);
            }
        }
    }

    #[test]
    fn node_decreases_match_brute_subtree_costs(tree in tree_strategy(10), z in 1u32..=2) {
        let objective = Objective::Power(z);
        let costs = common::brute_subtree_costs(&tree, |x| objective.apply(x), |a, b| a + b);
        let dec = node_cost_decreases(&tree, objective).unwrap();
        for node in 0..tree.len() {
            match tree.parent(node) {
                None => prop_assert!(dec[node].is_infinite()),
                Some(p) => {
                    let want = objective.many(tree.subtree_size(node), tree.value(p)) - costs[node];
                    prop_assert_eq!(dec[node], Decrease::Finite(want));
                }
            }
        }
    }

    #[test]
    fn root_center_is_optimal_in_every_enclosing_subtree(tree in tree_strategy(10), z in 1u32..=2) {
        let objective = Objective::Power(z);
        let root_center = kz_annotate(&tree, objective).unwrap().items()[0].center;
        let costs = common::brute_subtree_costs(&tree, |x| objective.apply(x), |a, b| a + b);
        for node in tree.ancestors(root_center) {
            let own: f64 = tree
                .leaves(node)
                .iter()
                .map(|&l| objective.apply(tree.lca_distance(l, root_center).unwrap()))
                .sum();
            prop_assert_eq!(own, costs[node], "node {}", node);
        }
    }

    #[test]
    fn kcenter_cost_ignores_which_leaf_of_a_subtree_is_picked(tree in tree_strategy(10), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let items = kz_annotate(&tree, Objective::Center).unwrap().items().to_vec();
        for k in 1..=tree.n_points() {
            let centers: Vec<usize> = items[..k].iter().map(|a| a.center).collect();
            let base = brute_cost(&tree, &centers, Objective::Center).unwrap();
            // Leaves of center i's subtree not claimed by a deeper placed center.
            let i = rng.random_range(0..k);
            let own = items[i].node;
            let free: Vec<usize> = tree
                .leaves(own)
                .iter()
                .copied()
                .filter(|&l| {
                    (0..k).all(|j| {
                        let nj = items[j].node;
                        nj == own || !tree.is_ancestor(own, nj) || !tree.is_ancestor(nj, l)
                    })
                })
                .collect();
            let mut swapped = centers.clone();
            swapped[i] = free[rng.random_range(0..free.len())];
            prop_assert_eq!(brute_cost(&tree, &swapped, Objective::Center).unwrap(), base);
        }
    }

    #[test]
    fn optimize_keeps_costs(tree in tree_strategy(10), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = tree.n_points();
        let points = PointSet::new((0..n).map(|_| vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect()).unwrap();
        for objective in [Objective::Center, Objective::MEDIAN, Objective::MEANS] {
            let plain = kz_annotate(&tree, objective).unwrap();
            let tuned = optimize_annotations(&plain, &tree, Some(&points)).unwrap();
            let before = cost_curve(&plain);
            let after = cost_curve(&tuned);
            prop_assert_eq!(
                before.losses().iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
                after.losses().iter().map(|x| x.to_bits()).collect::<Vec<_>>()
            );
            let h = build_hierarchy(&tuned).unwrap();
            for k in 1..=n {
                let best = brute_optimum(&tree, k, objective).unwrap().cost;
                let part = extract_partition(&h, k).unwrap();
                prop_assert_eq!(partition_cost(&tree, &part, objective).unwrap(), best);
            }
            let parts: Vec<_> = (1..=n).map(|k| extract_partition(&h, k).unwrap()).collect();
            for pair in parts.windows(2) {
                prop_assert!(common::one_split(&pair[0], &pair[1]).is_ok());
            }
        }
    }
}

#[test]
fn ten_copies_follow_euclidean_proximity() {
    let points = ten_copies(10.0);
    let tree = fit_dc(&points, 1, Exec::Sequential).unwrap().tree;
    let root = tree.root();
    assert_eq!(tree.value(root), 8.0);
    assert_eq!(tree.children(root).len(), 10);

    let plain = kz_annotate(&tree, Objective::MEDIAN).unwrap();
    let tuned = optimize_annotations(&plain, &tree, Some(&points)).unwrap();
    let two_plain = extract_partition(&build_hierarchy(&plain).unwrap(), 2).unwrap();
    let two_tuned = extract_partition(&build_hierarchy(&tuned).unwrap(), 2).unwrap();

    // Without point data the eight unplaced copies stay with the first center.
    let second: Vec<usize> = (0..30).filter(|&p| two_plain.labels()[p] == Some(1)).collect();
    assert_eq!(second, vec![3, 4, 5]);
    // With it, every copy to the right of the second center moves over.
    let first: Vec<usize> = (0..30).filter(|&p| two_tuned.labels()[p] == Some(0)).collect();
    assert_eq!(first, vec![0, 1, 2]);
    assert_eq!(
        partition_cost(&tree, &two_plain, Objective::MEDIAN).unwrap(),
        partition_cost(&tree, &two_tuned, Objective::MEDIAN).unwrap()
    );

    // Each reassigned copy is strictly closer to its new parent center.
    for (a, b) in plain.items().iter().zip(tuned.items()) {
        assert_eq!(a.center, b.center);
        if a.parent_center != b.parent_center {
            let (old, new) = (a.parent_center.unwrap(), b.parent_center.unwrap());
            let mean = points.mean(tree.leaves(a.node));
            let d = |c: usize| points.point(c).iter().zip(&mean).map(|(x, m)| (x - m) * (x - m)).sum::<f64>();
            assert!(d(new) < d(old));
        }
    }
}

#[test]
fn single_cluster_optimize_is_identity() {
    let points = PointSet::new(vec![vec![0.0], vec![1.0]]).unwrap();
    let tree = fit_dc(&points, 1, Exec::Sequential).unwrap().tree;
    let plain = kz_annotate(&tree, Objective::MEDIAN).unwrap();
    assert_eq!(optimize_annotations(&plain, &tree, Some(&points)).unwrap(), plain);
}

use super::cluster_tree::ClusterTree;
use super::labels::Partition;
use crate::error::PartitionError;

/// Stand-in for `1 / 0` when a cluster has zero cost.
pub const STABILITY_CAP: f64 = 1e12;

/// What a value function sees of a cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterInfo {
    pub node: usize,
    pub size: usize,
    pub cost: f64,
    /// Cost of the enclosing cluster; `None` at the root.
    pub parent_cost: Option<f64>,
}

/// Scores a cluster. Values must be non-negative.
pub trait ValueFunction {
    fn value(&self, cluster: &ClusterInfo) -> f64;
}

impl<F: Fn(&ClusterInfo) -> f64> ValueFunction for F {
    fn value(&self, cluster: &ClusterInfo) -> f64 {
        self(cluster)
    }
}

/// `|C| * (1 / L(C) - 1 / L(parent))`, clamped at 0. The root scores 0 and a
/// zero-cost cluster scores `cap * |C|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub cap: f64,
}

impl Default for Stability {
    fn default() -> Self {
        Stability { cap: STABILITY_CAP }
    }
}

impl ValueFunction for Stability {
    fn value(&self, c: &ClusterInfo) -> f64 {
        match c.parent_cost {
            None => 0.0,
            Some(parent) => stability_value_capped(c.size, c.cost, parent, self.cap),
        }
    }
}

/// Stability with the default cap.
pub fn stability_value(size: usize, cost: f64, parent_cost: f64) -> f64 {
    stability_value_capped(size, cost, parent_cost, STABILITY_CAP)
}

pub fn stability_value_capped(size: usize, cost: f64, parent_cost: f64, cap: f64) -> f64 {
    let size = size as f64;
    if cost <= 0.0 {
        return cap * size;
    }
    let inv_parent = if parent_cost > 0.0 { 1.0 / parent_cost } else { cap };
    (size * (1.0 / cost - inv_parent)).max(0.0)
}

/// Result of [`best_partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct BestPartition {
    pub partition: Partition,
    /// Selected tree nodes, in label order.
    pub selected: Vec<usize>,
    pub total_value: f64,
    /// True when every cluster was smaller than the minimum size.
    pub all_noise: bool,
}

/// Picks the antichain of clusters with the largest total value.
///
/// Clusters with fewer than `min_cluster_size` points are removed with their
/// subtrees first. Bottom-up, a cluster is kept over its children's best
/// selection only if its value is strictly larger. Removed points inside a
/// selected cluster stay in it; all others become noise.
pub fn best_partition<T, V>(tree: &T, v: &V, min_cluster_size: usize) -> Result<BestPartition, PartitionError>
where
    T: ClusterTree + ?Sized,
    V: ValueFunction + ?Sized,
{
    if min_cluster_size == 0 {
        return Err(PartitionError::ZeroMinClusterSize);
    }
    let n = tree.n_points();
    let root = tree.root();
    if tree.size(root) < min_cluster_size {
        return Ok(BestPartition {
            partition: Partition::from_clusters(n, Vec::new(), None),
            selected: Vec::new(),
            total_value: 0.0,
            all_noise: true,
        });
    }

    let len = tree.node_count();
    let mut parent = vec![usize::MAX; len];
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        order.push(node);
        for &c in tree.children(node) {
            if tree.size(c) >= min_cluster_size {
                parent[c] = node;
                stack.push(c);
            }
        }
    }

    let mut best = vec![0.0f64; len];
    let mut keep_self = vec![false; len];
    let mut child_sum = vec![0.0f64; len];
    let mut has_kept_child = vec![false; len];
    for &node in order.iter().rev() {
        let info = ClusterInfo {
            node,
            size: tree.size(node),
            cost: tree.cost(node),
            parent_cost: (node != root).then(|| tree.cost(parent[node])),
        };
        let own = v.value(&info);
        if !has_kept_child[node] || own > child_sum[node] {
            best[node] = own;
            keep_self[node] = true;
        } else {
            best[node] = child_sum[node];
        }
        if node != root {
            let p = parent[node];
            child_sum[p] += best[node];
            has_kept_child[p] = true;
        }
    }

    let mut selected = Vec::new();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if keep_self[node] {
            selected.push(node);
            continue;
        }
        for &c in tree.children(node).iter().rev() {
            if tree.size(c) >= min_cluster_size {
                stack.push(c);
            }
        }
    }
    let clusters: Vec<Vec<usize>> = selected.iter().map(|&s| tree.points(s).to_vec()).collect();
    let centers: Option<Vec<usize>> = selected.iter().map(|&s| tree.center(s)).collect();
    let partition = Partition::from_clusters(n, clusters, centers);
    selected.sort_by_key(|&s| tree.points(s).iter().min().copied());
    Ok(BestPartition {
        partition,
        selected,
        total_value: best[root],
        all_noise: false,
    })
}

use super::cluster_tree::ClusterTree;
use super::labels::Partition;
use crate::error::PartitionError;

/// The maximal clusters whose cost is strictly below `eps`. Points outside
/// every such cluster are noise. A leaf whose own value is below `eps` forms
/// a singleton cluster.
pub fn threshold_partition<T: ClusterTree + ?Sized>(tree: &T, eps: f64) -> Result<Partition, PartitionError> {
    if eps.is_nan() || eps < 0.0 {
        return Err(PartitionError::NegativeThreshold(eps));
    }
    let mut clusters = Vec::new();
    let mut centers = Vec::new();
    let mut stack = vec![tree.root()];
    while let Some(node) = stack.pop() {
        if tree.cost(node) < eps {
            clusters.push(tree.points(node).to_vec());
            centers.push(tree.center(node));
        } else {
            stack.extend(tree.children(node).iter().rev());
        }
    }
    let centers = centers.into_iter().collect::<Option<Vec<usize>>>();
    Ok(Partition::from_clusters(tree.n_points(), clusters, centers))
}

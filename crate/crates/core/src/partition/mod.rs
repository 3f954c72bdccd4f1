//! Choosing one clustering: elbow, median of elbows, thresholding and
//! stability.

mod cluster_tree;
mod elbow;
mod labels;
mod stability;
mod threshold;

pub use cluster_tree::ClusterTree;
pub use elbow::{elbow_index, elbow_of_losses, median_of, median_of_elbows, MedianOfElbows, ELBOW_TIE_TOLERANCE};
pub use labels::Partition;
pub use stability::{
    best_partition, stability_value, stability_value_capped, BestPartition, ClusterInfo, Stability, ValueFunction,
    STABILITY_CAP,
};
pub use threshold::threshold_partition;

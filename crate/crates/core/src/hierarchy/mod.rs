//! Optimal `k`-center and `(k, z)` solutions for every `k` over an LCA-tree.
//!
//! [`kz_annotate`] assigns each point one annotation. Sorted by decreasing
//! cost-decrease, the first `k` annotations are an optimal set of `k` centers.
//! [`build_hierarchy`] turns that order into nested clusters and
//! [`extract_partition`] reads off the clustering for a given `k`.

mod annotate;
mod build;
mod curve;
mod objective;

pub use annotate::{
    kcenter_annotate, kcenter_order, kcenter_solution, kz_annotate, node_cost_decreases, optimize_annotations, Annotations,
    CenterAnnotation, KCenterSolution, KCenterStep,
};
pub use build::{build_hierarchy, extract_partition, ClusterHierarchy, HierNode, HierNodeParts};
pub use curve::{cost_curve, CostCurve};
pub use objective::{Decrease, Objective, MAX_POWER};

use crate::error::HierarchyError;
use crate::ultra::LcaTree;

/// Annotates `tree` and builds the hierarchy in one call.
pub fn hierarchy_for(tree: &LcaTree, objective: Objective) -> Result<ClusterHierarchy, HierarchyError> {
    build_hierarchy(&kz_annotate(tree, objective)?)
}

//! LCA-trees: storage, validation and construction.
//!
//! Leaves occupy arena slots `0..n_points`, so point `i` is node `i`. Internal
//! nodes follow. Every traversal is iterative.

mod build;
mod mst;
mod tree;
mod validate;
mod worstcase;

pub use build::{build_from_dissimilarity, minimax_tree, DenseMatrix, Dissimilarity, FnDissimilarity};
pub use mst::{prim_mst, Edge};
pub use tree::{LcaNode, LcaTree, NodeId, RawNode, TreeBuilder};
pub use validate::{validate, ValidationReport, Violation};
pub use worstcase::{make_worstcase_tree, make_worstcase_tree_with_budget, DEFAULT_NODE_BUDGET};

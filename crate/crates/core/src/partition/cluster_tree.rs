use crate::hierarchy::ClusterHierarchy;
use crate::ultra::LcaTree;

/// A rooted tree of nested clusters with a cost per cluster. Implemented by
/// LCA-trees (cost = node value) and cluster hierarchies.
pub trait ClusterTree {
    fn n_points(&self) -> usize;

    fn root(&self) -> usize;

    fn children(&self, node: usize) -> &[usize];

    fn cost(&self, node: usize) -> f64;

    fn points(&self, node: usize) -> &[usize];

    fn center(&self, node: usize) -> Option<usize>;

    fn size(&self, node: usize) -> usize {
        self.points(node).len()
    }

    fn node_count(&self) -> usize;
}

impl ClusterTree for LcaTree {
    fn n_points(&self) -> usize {
        LcaTree::n_points(self)
    }

    fn root(&self) -> usize {
        LcaTree::root(self)
    }

    fn children(&self, node: usize) -> &[usize] {
        LcaTree::children(self, node)
    }

    fn cost(&self, node: usize) -> f64 {
        self.value(node)
    }

    fn points(&self, node: usize) -> &[usize] {
        self.leaves(node)
    }

    fn center(&self, _node: usize) -> Option<usize> {
        None
    }

    fn size(&self, node: usize) -> usize {
        self.subtree_size(node)
    }

    fn node_count(&self) -> usize {
        self.len()
    }
}

impl ClusterTree for ClusterHierarchy {
    fn n_points(&self) -> usize {
        ClusterHierarchy::n_points(self)
    }

    fn root(&self) -> usize {
        ClusterHierarchy::root(self)
    }

    fn children(&self, node: usize) -> &[usize] {
        &self.node(node).children
    }

    fn cost(&self, node: usize) -> f64 {
        self.node(node).cost
    }

    fn points(&self, node: usize) -> &[usize] {
        ClusterHierarchy::points(self, node)
    }

    fn center(&self, node: usize) -> Option<usize> {
        Some(self.node(node).center)
    }

    fn size(&self, node: usize) -> usize {
        ClusterHierarchy::size(self, node)
    }

    fn node_count(&self) -> usize {
        self.len()
    }
}

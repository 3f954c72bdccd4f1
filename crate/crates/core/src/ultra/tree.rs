use std::ops::Range;

use crate::error::{StructureError, TreeError};

/// Index into the node arena of an [`LcaTree`].
pub type NodeId = usize;

/// A node as supplied by a caller or a file, before spans are computed.
#[derive(Debug, Clone, PartialEq)]
pub struct RawNode {
    pub value: f64,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

/// One node of an [`LcaTree`].
#[derive(Debug, Clone, PartialEq)]
pub struct LcaNode {
    value: f64,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    subtree_size: usize,
    leaf_span: (usize, usize),
}

impl LcaNode {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn subtree_size(&self) -> usize {
        self.subtree_size
    }

    /// Half-open range into [`LcaTree::leaf_order`].
    pub fn leaf_span(&self) -> (usize, usize) {
        self.leaf_span
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Rooted tree whose leaves are points and whose node values encode a
/// dissimilarity: `d(i, j)` is the value of the lowest common ancestor of
/// leaves `i` and `j`, and `d(i, i)` is the value of leaf `i`.
///
/// Leaves sit at arena slots `0..n_points`. The tree is immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct LcaTree {
    nodes: Vec<LcaNode>,
    root: NodeId,
    leaf_order: Vec<usize>,
    n_points: usize,
    depth: Vec<u32>,
}

impl LcaTree {
    /// Checks the structure of `raw` and computes sizes, depths and the
    /// postfix leaf order. Node values are not inspected; see
    /// [`validate`](super::validate).
    pub fn from_raw(raw: Vec<RawNode>, root: NodeId, n_points: usize) -> Result<Self, StructureError> {
        check_structure(&raw, root, n_points)?;

        let len = raw.len();
        let mut nodes: Vec<LcaNode> = raw
            .into_iter()
            .map(|r| LcaNode {
                value: r.value,
                parent: r.parent,
                children: r.children,
                subtree_size: 0,
                leaf_span: (0, 0),
            })
            .collect();
        let mut depth = vec![0u32; len];
        let mut leaf_order = Vec::with_capacity(n_points);
        let mut visited = 0usize;

        let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
        nodes[root].leaf_span.0 = 0;
        while let Some(top) = stack.last_mut() {
            let (node, next) = *top;
            if next == 0 {
                visited += 1;
                nodes[node].leaf_span.0 = leaf_order.len();
                if nodes[node].children.is_empty() {
                    leaf_order.push(node);
                }
            }
            if next < nodes[node].children.len() {
                top.1 += 1;
                let child = nodes[node].children[next];
                depth[child] = depth[node] + 1;
                stack.push((child, 0));
            } else {
                let start = nodes[node].leaf_span.0;
                nodes[node].leaf_span = (start, leaf_order.len());
                nodes[node].subtree_size = leaf_order.len() - start;
                stack.pop();
            }
        }
        debug_assert_eq!(visited, len);
        debug_assert_eq!(leaf_order.len(), n_points);

        Ok(LcaTree {
            nodes,
            root,
            leaf_order,
            n_points,
            depth,
        })
    }

    /// A tree with a single point.
    pub fn singleton(value: f64) -> Self {
        Self::from_raw(
            vec![RawNode {
                value,
                parent: None,
                children: Vec::new(),
            }],
            0,
            1,
        )
        .expect("a single leaf is a valid tree")
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Total number of nodes, leaves included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[LcaNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &LcaNode {
        &self.nodes[id]
    }

    pub fn value(&self, id: NodeId) -> f64 {
        self.nodes[id].value
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn subtree_size(&self, id: NodeId) -> usize {
        self.nodes[id].subtree_size
    }

    /// Number of edges between `id` and the root.
    pub fn depth(&self, id: NodeId) -> usize {
        self.depth[id] as usize
    }

    /// Point indices in postfix order.
    pub fn leaf_order(&self) -> &[usize] {
        &self.leaf_order
    }

    pub fn span(&self, id: NodeId) -> Range<usize> {
        let (s, e) = self.nodes[id].leaf_span;
        s..e
    }

    /// Points below `id`.
    ///
    /// # Panics
    /// If `id` is not a node of this tree.
    pub fn leaves(&self, id: NodeId) -> &[usize] {
        &self.leaf_order[self.span(id)]
    }

    /// Checked form of [`leaves`](Self::leaves).
    pub fn leaves_of(&self, id: NodeId) -> Result<&[usize], TreeError> {
        self.check_node(id)?;
        Ok(self.leaves(id))
    }

    /// True if `a` is `b` or an ancestor of `b`.
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let (sa, ea) = self.nodes[a].leaf_span;
        let (sb, eb) = self.nodes[b].leaf_span;
        sa <= sb && eb <= ea && self.depth[a] <= self.depth[b]
    }

    /// Lowest common ancestor of two nodes.
    pub fn lca(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.depth[a] > self.depth[b] {
            a = self.nodes[a].parent.expect("non-root has a parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.nodes[b].parent.expect("non-root has a parent");
        }
        while a != b {
            a = self.nodes[a].parent.expect("non-root has a parent");
            b = self.nodes[b].parent.expect("non-root has a parent");
        }
        a
    }

    /// Value of the lowest common ancestor of points `i` and `j`.
    pub fn lca_distance(&self, i: usize, j: usize) -> Result<f64, TreeError> {
        self.check_point(i)?;
        self.check_point(j)?;
        Ok(self.nodes[self.lca(i, j)].value)
    }

    /// All pairwise LCA-distances as a row-major `n × n` matrix, in `O(n²)`.
    pub fn distance_matrix(&self) -> Vec<f64> {
        let n = self.n_points;
        let mut d = vec![0.0; n * n];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.is_empty() {
                d[i * n + i] = node.value;
                continue;
            }
            for (a_pos, &a) in node.children.iter().enumerate() {
                for &b in &node.children[a_pos + 1..] {
                    for &x in self.leaves(a) {
                        for &y in self.leaves(b) {
                            d[x * n + y] = node.value;
                            d[y * n + x] = node.value;
                        }
                    }
                }
            }
        }
        d
    }

    /// Nodes in depth-first preorder, children in stored order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(self.nodes[node].children.iter().rev());
        }
        out
    }

    /// Nodes in depth-first postorder, children in stored order.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = self.preorder_mirrored();
        out.reverse();
        out
    }

    // Preorder visiting children right to left; its reverse is a postorder
    // visiting children left to right.
    fn preorder_mirrored(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(self.nodes[node].children.iter());
        }
        out
    }

    /// Path from `id` up to and including the root.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(id), move |&n| self.nodes[n].parent)
    }

    /// Same topology with every node value replaced.
    pub fn with_values(&self, values: &[f64]) -> Result<LcaTree, TreeError> {
        if values.len() != self.nodes.len() {
            return Err(TreeError::InvalidParameter("value count must equal node count"));
        }
        let mut out = self.clone();
        for (node, &v) in out.nodes.iter_mut().zip(values) {
            node.value = v;
        }
        Ok(out)
    }

    pub fn to_raw(&self) -> Vec<RawNode> {
        self.nodes
            .iter()
            .map(|n| RawNode {
                value: n.value,
                parent: n.parent,
                children: n.children.clone(),
            })
            .collect()
    }

    pub(crate) fn check_point(&self, i: usize) -> Result<(), TreeError> {
        if i < self.n_points {
            Ok(())
        } else {
            Err(TreeError::IndexOutOfRange {
                what: "point",
                index: i,
                len: self.n_points,
            })
        }
    }

    pub(crate) fn check_node(&self, id: NodeId) -> Result<(), TreeError> {
        if id < self.nodes.len() {
            Ok(())
        } else {
            Err(TreeError::IndexOutOfRange {
                what: "node",
                index: id,
                len: self.nodes.len(),
            })
        }
    }
}

fn check_structure(raw: &[RawNode], root: NodeId, n_points: usize) -> Result<(), StructureError> {
    if raw.is_empty() || n_points == 0 {
        return Err(StructureError::Empty);
    }
    if raw.len() < n_points {
        return Err(StructureError::TooFewNodes {
            n_points,
            nodes: raw.len(),
        });
    }
    let len = raw.len();
    if root >= len {
        return Err(StructureError::DanglingIndex {
            node: root,
            target: root,
        });
    }
    for (i, node) in raw.iter().enumerate() {
        if let Some(p) = node.parent {
            if p >= len {
                return Err(StructureError::DanglingIndex { node: i, target: p });
            }
        }
        if let Some(&c) = node.children.iter().find(|&&c| c >= len) {
            return Err(StructureError::DanglingIndex { node: i, target: c });
        }
    }
    if raw[root].parent.is_some() {
        return Err(StructureError::RootHasParent(root));
    }

    let mut listed = vec![false; len];
    for (i, node) in raw.iter().enumerate() {
        for &c in &node.children {
            if raw[c].parent != Some(i) {
                return Err(StructureError::ParentMismatch {
                    child: c,
                    parent: i,
                    recorded: raw[c].parent,
                });
            }
            if std::mem::replace(&mut listed[c], true) {
                return Err(StructureError::SharedChild(c));
            }
        }
    }

    for (i, node) in raw.iter().enumerate() {
        match (i < n_points, node.children.len()) {
            (true, 0) => {}
            (true, _) => return Err(StructureError::LeafWithChildren(i)),
            (false, 0) => return Err(StructureError::MisplacedLeaf(i)),
            (false, 1) => return Err(StructureError::UnderfullNode(i)),
            (false, _) => {}
        }
        if i != root {
            match node.parent {
                None => return Err(StructureError::Orphan(i)),
                Some(_) if !listed[i] => {
                    return Err(StructureError::Inconsistent {
                        node: i,
                        what: "parent link",
                    })
                }
                Some(_) => {}
            }
        }
    }

    // Links are now a consistent parent function. Anything the root cannot
    // reach has a parent chain that never terminates.
    let mut reached = vec![false; len];
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        reached[n] = true;
        stack.extend(raw[n].children.iter().copied());
    }
    if let Some(i) = reached.iter().position(|&r| !r) {
        return Err(StructureError::Cycle(i));
    }
    Ok(())
}

/// Incremental construction with leaves preallocated at `0..n`.
///
/// ```
/// use ship_core::ultra::TreeBuilder;
///
/// let mut b = TreeBuilder::new(&[0.0, 0.0, 0.0]);
/// let pair = b.internal(1.0, &[0, 1]);
/// let root = b.internal(4.0, &[pair, 2]);
/// let tree = b.finish(root).unwrap();
/// assert_eq!(tree.lca_distance(0, 2).unwrap(), 4.0);
/// ```
#[derive(Debug, Clone)]
pub struct TreeBuilder {
    nodes: Vec<RawNode>,
    n_points: usize,
}

impl TreeBuilder {
    pub fn new(leaf_values: &[f64]) -> Self {
        TreeBuilder {
            nodes: leaf_values
                .iter()
                .map(|&value| RawNode {
                    value,
                    parent: None,
                    children: Vec::new(),
                })
                .collect(),
            n_points: leaf_values.len(),
        }
    }

    /// Adds an internal node over `children` and returns its id.
    pub fn internal(&mut self, value: f64, children: &[NodeId]) -> NodeId {
        let id = self.nodes.len();
        for &c in children {
            if let Some(node) = self.nodes.get_mut(c) {
                node.parent = Some(id);
            }
        }
        self.nodes.push(RawNode {
            value,
            parent: None,
            children: children.to_vec(),
        });
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn finish(self, root: NodeId) -> Result<LcaTree, StructureError> {
        LcaTree::from_raw(self.nodes, root, self.n_points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t4;

    #[test]
    fn t4_distances() {
        let t = t4();
        assert_eq!(t.lca_distance(0, 1).unwrap(), 2.0);
        assert_eq!(t.lca_distance(0, 2).unwrap(), 5.0);
        assert_eq!(t.lca_distance(0, 0).unwrap(), 0.0);
        assert_eq!(t.lca_distance(2, 3).unwrap(), 3.0);
        assert!(matches!(
            t.lca_distance(0, 4),
            Err(TreeError::IndexOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn t4_leaf_spans() {
        let t = t4();
        let mut a = t.leaves_of(4).unwrap().to_vec();
        a.sort();
        assert_eq!(a, vec![0, 1]);
        assert_eq!(t.leaves_of(t.root()).unwrap().len(), 4);
        assert_eq!(t.leaves_of(2).unwrap(), &[2]);
        assert!(t.leaves_of(7).is_err());
        assert_eq!(t.subtree_size(t.root()), 4);
    }

    #[test]
    fn distance_matrix_matches_lca() {
        let t = t4();
        let d = t.distance_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(d[i * 4 + j], t.lca_distance(i, j).unwrap());
            }
        }
    }

    #[test]
    fn orders_cover_all_nodes() {
        let t = t4();
        let pre = t.preorder();
        let post = t.postorder();
        assert_eq!(pre[0], t.root());
        assert_eq!(*post.last().unwrap(), t.root());
        assert_eq!(post, vec![0, 1, 4, 2, 3, 5, 6]);
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 200_000;
        let mut b = TreeBuilder::new(&vec![0.0; n]);
        let mut cur = b.internal(1.0, &[0, 1]);
        for i in 2..n {
            cur = b.internal(i as f64, &[cur, i]);
        }
        let t = b.finish(cur).unwrap();
        assert_eq!(t.lca_distance(0, n - 1).unwrap(), (n - 1) as f64);
        assert_eq!(t.depth(0), n - 1);
        assert_eq!(t.postorder().len(), 2 * n - 1);
    }

    fn raw(value: f64, parent: Option<NodeId>, children: Vec<NodeId>) -> RawNode {
        RawNode {
            value,
            parent,
            children,
        }
    }

    #[test]
    fn structural_errors() {
        let ok = || {
            vec![
                raw(0.0, Some(2), vec![]),
                raw(0.0, Some(2), vec![]),
                raw(1.0, None, vec![0, 1]),
            ]
        };
        assert!(LcaTree::from_raw(ok(), 2, 2).is_ok());

        let mut r = ok();
        r[1].parent = None;
        assert_eq!(
            LcaTree::from_raw(r, 2, 2),
            Err(StructureError::ParentMismatch {
                child: 1,
                parent: 2,
                recorded: None
            })
        );

        let mut r = ok();
        r[2].children = vec![0];
        r[1].parent = None;
        assert_eq!(LcaTree::from_raw(r, 2, 2), Err(StructureError::Orphan(1)));

        let r = vec![
            raw(0.0, Some(2), vec![]),
            raw(0.0, Some(3), vec![]),
            raw(1.0, Some(3), vec![0]),
            raw(2.0, None, vec![2, 1]),
        ];
        assert_eq!(LcaTree::from_raw(r, 3, 2), Err(StructureError::UnderfullNode(2)));

        let mut r = ok();
        r[2].children.push(5);
        assert!(matches!(
            LcaTree::from_raw(r, 2, 2),
            Err(StructureError::DanglingIndex { node: 2, target: 5 })
        ));

        let r = vec![
            raw(0.0, Some(2), vec![]),
            raw(0.0, Some(2), vec![]),
            raw(1.0, None, vec![0, 1, 3]),
            raw(0.0, Some(2), vec![]),
        ];
        assert_eq!(LcaTree::from_raw(r, 2, 2), Err(StructureError::MisplacedLeaf(3)));

        let r = vec![raw(0.0, None, vec![]), raw(0.0, None, vec![])];
        assert_eq!(LcaTree::from_raw(r, 0, 2), Err(StructureError::Orphan(1)));
    }

    #[test]
    fn detached_cycle_is_reported_as_cycle() {
        // Root 4 over leaves 0, 1. Nodes 5 and 6 form a two-cycle that also
        // holds leaves 2 and 3.
        let r = vec![
            raw(0.0, Some(4), vec![]),
            raw(0.0, Some(4), vec![]),
            raw(0.0, Some(5), vec![]),
            raw(0.0, Some(6), vec![]),
            raw(2.0, None, vec![0, 1]),
            raw(3.0, Some(6), vec![2, 6]),
            raw(3.0, Some(5), vec![3, 5]),
        ];
        assert!(matches!(LcaTree::from_raw(r, 4, 4), Err(StructureError::Cycle(_))));
    }

    #[test]
    fn singleton_tree() {
        let t = LcaTree::singleton(0.5);
        assert_eq!(t.n_points(), 1);
        assert_eq!(t.lca_distance(0, 0).unwrap(), 0.5);
        assert_eq!(t.leaf_order(), &[0]);
    }
}

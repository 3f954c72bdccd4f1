use std::collections::HashMap;
use std::ops::Range;

use super::annotate::Annotations;
use super::curve::{cost_curve, CostCurve};
use super::objective::{Decrease, Objective};
use crate::error::HierarchyError;
use crate::partition::Partition;

/// One cluster of a [`ClusterHierarchy`].
#[derive(Debug, Clone, PartialEq)]
pub struct HierNode {
    pub center: usize,
    /// Smallest `k` whose solution contains this node (or, for a node made
    /// in a multi-way split, the `k` at which it was split off).
    pub split_k: usize,
    /// Cost of this cluster served by `center`.
    pub cost: f64,
    pub parent: Option<usize>,
    /// The first child, if any, keeps the parent's center.
    pub children: Vec<usize>,
    /// Half-open range into [`ClusterHierarchy::leaf_order`].
    pub span: (usize, usize),
    /// True if this node keeps its parent's center.
    pub continues_parent: bool,
}

/// Nested optimal clusterings for every `k`. Leaves are single points, and
/// going from `k` to `k + 1` splits exactly one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterHierarchy {
    nodes: Vec<HierNode>,
    objective: Objective,
    n_points: usize,
    leaf_order: Vec<usize>,
    leaf_of_point: Vec<usize>,
    curve: CostCurve,
}

/// Structural fields of a hierarchy node, as persisted.
#[derive(Debug, Clone, PartialEq)]
pub struct HierNodeParts {
    pub center: usize,
    pub split_k: usize,
    pub cost: f64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub continues_parent: bool,
}

impl ClusterHierarchy {
    /// Reassembles a hierarchy from stored nodes, recomputing spans. Node 0
    /// must be the root.
    pub fn from_parts(
        objective: Objective,
        n_points: usize,
        parts: Vec<HierNodeParts>,
        losses: Vec<f64>,
    ) -> Result<Self, String> {
        if parts.is_empty() || n_points == 0 {
            return Err("hierarchy has no nodes".into());
        }
        if losses.len() != n_points {
            return Err(format!("expected {n_points} losses, found {}", losses.len()));
        }
        let len = parts.len();
        if parts[0].parent.is_some() {
            return Err("node 0 must be the root".into());
        }
        for (i, p) in parts.iter().enumerate() {
            if p.center >= n_points {
                return Err(format!("node {i}: center {} out of range", p.center));
            }
            if i > 0 && p.parent.is_none_or(|q| q >= len || !parts[q].children.contains(&i)) {
                return Err(format!("node {i}: parent link is inconsistent"));
            }
            for &c in &p.children {
                if c >= len || parts[c].parent != Some(i) {
                    return Err(format!("node {i}: child {c} is inconsistent"));
                }
            }
            if p.children.len() == 1 {
                return Err(format!("node {i} has a single child"));
            }
        }
        let nodes = parts
            .into_iter()
            .map(|p| HierNode {
                center: p.center,
                split_k: p.split_k,
                cost: p.cost,
                parent: p.parent,
                children: p.children,
                span: (0, 0),
                continues_parent: p.continues_parent,
            })
            .collect();
        let mut h = ClusterHierarchy {
            nodes,
            objective,
            n_points,
            leaf_order: Vec::new(),
            leaf_of_point: Vec::new(),
            curve: CostCurve::new(objective, losses),
        };
        h.index_leaves().map_err(|e| e.to_string())?;
        Ok(h)
    }

    // Postfix spans by an explicit-stack walk. Every leaf must hold a
    // distinct point and every point must appear.
    fn index_leaves(&mut self) -> Result<(), &'static str> {
        let mut order = Vec::with_capacity(self.n_points);
        let mut leaf_of_point = vec![usize::MAX; self.n_points];
        let mut visited = 0usize;
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        while let Some(top) = stack.last_mut() {
            let (node, next) = *top;
            if next == 0 {
                visited += 1;
                if visited > self.nodes.len() {
                    return Err("hierarchy contains a cycle");
                }
                self.nodes[node].span.0 = order.len();
                if self.nodes[node].children.is_empty() {
                    let p = self.nodes[node].center;
                    if leaf_of_point[p] != usize::MAX {
                        return Err("a point appears at two leaves");
                    }
                    leaf_of_point[p] = node;
                    order.push(p);
                }
            }
            if next < self.nodes[node].children.len() {
                top.1 += 1;
                let child = self.nodes[node].children[next];
                stack.push((child, 0));
            } else {
                self.nodes[node].span.1 = order.len();
                stack.pop();
            }
        }
        if visited != self.nodes.len() {
            return Err("hierarchy has nodes unreachable from the root");
        }
        if order.len() != self.n_points {
            return Err("leaves do not cover every point");
        }
        self.leaf_order = order;
        self.leaf_of_point = leaf_of_point;
        Ok(())
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[HierNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &HierNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn curve(&self) -> &CostCurve {
        &self.curve
    }

    pub fn leaf_order(&self) -> &[usize] {
        &self.leaf_order
    }

    pub fn span(&self, id: usize) -> Range<usize> {
        let (s, e) = self.nodes[id].span;
        s..e
    }

    /// Points in the cluster of node `id`.
    pub fn points(&self, id: usize) -> &[usize] {
        &self.leaf_order[self.span(id)]
    }

    pub fn size(&self, id: usize) -> usize {
        let (s, e) = self.nodes[id].span;
        e - s
    }

    /// The leaf holding point `p`.
    pub fn leaf_of_point(&self, p: usize) -> usize {
        self.leaf_of_point[p]
    }
}

// Nodes under construction, with the decrease at which each was split and
// the per-point cost of attaching it to its parent's center.
struct Arena {
    nodes: Vec<HierNode>,
    split_at: Vec<Option<Decrease>>,
    attach: Vec<f64>,
}

impl Arena {
    fn push(&mut self, center: usize, split_k: usize, parent: Option<usize>, cont: bool, attach: f64) -> usize {
        self.nodes.push(HierNode {
            center,
            split_k,
            cost: 0.0,
            parent,
            children: Vec::new(),
            span: (0, 0),
            continues_parent: cont,
        });
        self.split_at.push(None);
        self.attach.push(attach);
        self.nodes.len() - 1
    }
}

/// Assembles the cluster hierarchy from annotations in placement order.
///
/// The `k`-th annotation splits the lowest node of its parent center into the
/// parent's continuation and the new center. If the parent center's last split
/// happened at exactly the same cost-decrease, the new center joins that split
/// instead, so equal-cost splits of one cluster share a single node.
pub fn build_hierarchy(annotations: &Annotations) -> Result<ClusterHierarchy, HierarchyError> {
    let n = annotations.n_points();
    let items = annotations.items();
    let objective = annotations.objective();

    let mut active = vec![usize::MAX; n];
    let mut ar = Arena {
        nodes: Vec::with_capacity(2 * n),
        split_at: Vec::with_capacity(2 * n),
        attach: Vec::with_capacity(2 * n),
    };

    let root = &items[0];
    let r = ar.push(root.center, 1, None, false, 0.0);
    active[root.center] = r;

    for (idx, a) in items.iter().enumerate().skip(1) {
        let k = idx + 1;
        let p = a.parent_center.expect("only the first annotation is a root");
        let cur = active[p];
        if cur == usize::MAX {
            return Err(HierarchyError::UnplacedParent {
                center: a.center,
                parent: p,
            });
        }
        let grouped = ar.nodes[cur].continues_parent
            && ar.nodes[cur]
                .parent
                .is_some_and(|q| ar.split_at.get(q).copied().flatten() == Some(a.cost_decrease));
        let fresh = if grouped {
            let q = ar.nodes[cur].parent.expect("checked above");
            let id = ar.push(a.center, k, Some(q), false, a.attach_cost);
            ar.nodes[q].children.push(id);
            id
        } else {
            let attach_parent = ar.attach.get(cur).copied().unwrap_or(0.0);
            let orig = ar.push(p, k, Some(cur), true, attach_parent);
            let id = ar.push(a.center, k, Some(cur), false, a.attach_cost);
            ar.nodes[cur].children = vec![orig, id];
            ar.split_at[cur] = Some(a.cost_decrease);
            active[p] = orig;
            id
        };
        active[a.center] = fresh;
    }

    let Arena { nodes, attach, .. } = ar;
    let mut self_cost = vec![0.0; n];
    for a in items {
        self_cost[a.center] = a.self_cost;
    }
    let mut h = ClusterHierarchy {
        nodes,
        objective,
        n_points: n,
        leaf_order: Vec::new(),
        leaf_of_point: Vec::new(),
        curve: cost_curve(annotations),
    };
    h.index_leaves().expect("every center ends at its own leaf");

    // Children are created after their parents, so reverse creation order is
    // a valid bottom-up order.
    for id in (0..h.nodes.len()).rev() {
        let node = &h.nodes[id];
        let cost = match node.children.split_first() {
            None => self_cost[node.center],
            Some((&orig, rest)) => rest.iter().fold(h.nodes[orig].cost, |acc, &c| {
                objective.combine(acc, objective.many(h.size(c), attach[c]))
            }),
        };
        h.nodes[id].cost = cost;
    }
    Ok(h)
}

/// The `k`-cluster solution: every hierarchy edge with `split_k <= k` is cut.
///
/// When only some children of a node are cut, the uncut ones stay with the
/// cluster that keeps the node's center.
pub fn extract_partition(hier: &ClusterHierarchy, k: usize) -> Result<Partition, HierarchyError> {
    let n = hier.n_points();
    if k == 0 || k > n {
        return Err(HierarchyError::KOutOfRange { k, n });
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut centers: Vec<usize> = Vec::new();
    let mut cluster_of_center: HashMap<usize, usize> = HashMap::new();
    let mut leftovers: Vec<(usize, usize)> = Vec::new();
    let mut stack = vec![hier.root()];
    while let Some(id) = stack.pop() {
        let node = hier.node(id);
        let cut: Vec<usize> = node.children.iter().copied().filter(|&c| hier.node(c).split_k <= k).collect();
        if cut.is_empty() {
            cluster_of_center.insert(node.center, clusters.len());
            clusters.push(hier.points(id).to_vec());
            centers.push(node.center);
            continue;
        }
        for &c in &node.children {
            if hier.node(c).split_k > k {
                leftovers.push((node.center, c));
            }
        }
        stack.extend(cut.into_iter().rev());
    }
    for (center, c) in leftovers {
        let slot = cluster_of_center[&center];
        clusters[slot].extend_from_slice(hier.points(c));
    }
    Ok(Partition::from_clusters(n, clusters, Some(centers)))
}

use std::cmp::Reverse;

use super::objective::{Decrease, Objective};
use crate::error::HierarchyError;
use crate::metrics::PointSet;
use crate::partition::Partition;
use crate::ultra::{validate, LcaTree, NodeId};

/// One center of the optimal solution family and what placing it buys.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterAnnotation {
    /// Drop in total cost when this center is added after its parent.
    pub cost_decrease: Decrease,
    pub center: usize,
    /// Center that serves this subtree until this center is placed.
    pub parent_center: Option<usize>,
    /// Tree node whose subtree this center takes over.
    pub node: NodeId,
    /// Cost of the subtree at `node` served by `center` alone.
    pub subtree_cost: f64,
    /// Per-point cost of serving the subtree from the parent center.
    pub attach_cost: f64,
    /// Cost of `center` serving itself.
    pub self_cost: f64,
    /// Number of points below `node`.
    pub size: usize,
    /// Preorder position of `node`; breaks ties between equal decreases so
    /// that ancestors come first.
    pub rank: usize,
}

/// A complete set of annotations in placement order: sorted by decreasing
/// cost-decrease, every parent center before the centers it hands off to.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotations {
    objective: Objective,
    n_points: usize,
    items: Vec<CenterAnnotation>,
}

impl Annotations {
    /// Checks that `items` describe one annotation per point with a single
    /// root, then sorts them into placement order.
    pub fn new(objective: Objective, n_points: usize, items: Vec<CenterAnnotation>) -> Result<Self, HierarchyError> {
        objective.check()?;
        if items.len() != n_points {
            return Err(HierarchyError::AnnotationCount {
                expected: n_points,
                found: items.len(),
            });
        }
        let mut seen = vec![false; n_points];
        let mut roots = 0;
        for a in &items {
            if a.center >= n_points {
                return Err(HierarchyError::CenterOutOfRange {
                    center: a.center,
                    n: n_points,
                });
            }
            if std::mem::replace(&mut seen[a.center], true) {
                return Err(HierarchyError::DuplicateCenter(a.center));
            }
            match (a.parent_center, a.cost_decrease) {
                (None, Decrease::Infinite) => roots += 1,
                (Some(p), Decrease::Finite(x)) if x >= 0.0 => {
                    if p >= n_points {
                        return Err(HierarchyError::CenterOutOfRange { center: p, n: n_points });
                    }
                }
                _ => return Err(HierarchyError::BadDecrease(a.center)),
            }
        }
        match roots {
            0 => return Err(HierarchyError::MissingRoot),
            1 => {}
            _ => return Err(HierarchyError::MultipleRoots),
        }

        let mut order: Vec<usize> = (0..items.len()).collect();
        order.sort_by_key(|&i| (Reverse(items[i].cost_decrease), items[i].rank, items[i].center));
        let order = parents_first(&items, &order, n_points)?;
        let mut slots: Vec<Option<CenterAnnotation>> = items.into_iter().map(Some).collect();
        let items = order.into_iter().map(|i| slots[i].take().expect("each index once")).collect();
        Ok(Annotations {
            objective,
            n_points,
            items,
        })
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Annotations in placement order; the `k`-th solution uses the first `k`.
    pub fn items(&self) -> &[CenterAnnotation] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

// Keeps the sorted order but holds back any annotation whose parent center
// has not been placed yet, releasing it right after the parent. With exact
// arithmetic this never triggers; it guards against rounding.
fn parents_first(items: &[CenterAnnotation], sorted: &[usize], n: usize) -> Result<Vec<usize>, HierarchyError> {
    let mut placed = vec![false; n];
    let mut waiting: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out = Vec::with_capacity(items.len());
    for &i in sorted {
        match items[i].parent_center {
            Some(p) if !placed[p] => waiting[p].push(i),
            _ => {
                let mut stack = vec![i];
                while let Some(j) = stack.pop() {
                    out.push(j);
                    let c = items[j].center;
                    placed[c] = true;
                    stack.extend(std::mem::take(&mut waiting[c]).into_iter().rev());
                }
            }
        }
    }
    if out.len() < items.len() {
        let stuck = (0..n)
            .flat_map(|p| waiting[p].iter().map(move |&i| (p, i)))
            .next()
            .expect("some annotation is waiting");
        return Err(HierarchyError::UnplacedParent {
            center: items[stuck.1].center,
            parent: stuck.0,
        });
    }
    Ok(out)
}

/// Corresponding centers and cost-decreases for `objective` in one
/// bottom-up pass.
///
/// For `(k, z)` objectives each node keeps the child center that minimises
/// the subtree cost, with ties going to the earlier child. For `k`-center the
/// first child's center always moves up, since every center of a subtree
/// costs the same.
pub fn kz_annotate(tree: &LcaTree, objective: Objective) -> Result<Annotations, HierarchyError> {
    objective.check()?;
    validate(tree).into_result()?;
    let len = tree.len();
    let mut rank = vec![0usize; len];
    for (pos, node) in tree.preorder().into_iter().enumerate() {
        rank[node] = pos;
    }
    let mut center = vec![0usize; len];
    let mut cost = vec![0.0f64; len];
    let mut items = Vec::with_capacity(tree.n_points());
    let self_cost = |c: usize| objective.apply(tree.value(c));

    for node in tree.postorder() {
        if tree.is_leaf(node) {
            center[node] = node;
            cost[node] = self_cost(node);
            continue;
        }
        let dv = tree.value(node);
        let size = tree.subtree_size(node);
        let children = tree.children(node);
        let (best, best_cost) = match objective {
            Objective::Center => (children[0], dv),
            Objective::Power(_) => {
                let mut best = children[0];
                let mut best_cost = f64::INFINITY;
                for &c in children {
                    let here = cost[c] + objective.many(size - tree.subtree_size(c), dv);
                    if here < best_cost {
                        best = c;
                        best_cost = here;
                    }
                }
                (best, best_cost)
            }
        };
        center[node] = center[best];
        cost[node] = best_cost;
        for &c in children.iter().filter(|&&c| c != best) {
            let csize = tree.subtree_size(c);
            let decrease = match objective {
                Objective::Center => dv,
                Objective::Power(_) => (objective.many(csize, dv) - cost[c]).max(0.0),
            };
            items.push(CenterAnnotation {
                cost_decrease: Decrease::Finite(decrease),
                center: center[c],
                parent_center: Some(center[node]),
                node: c,
                subtree_cost: cost[c],
                attach_cost: objective.apply(dv),
                self_cost: self_cost(center[c]),
                size: csize,
                rank: rank[c],
            });
        }
    }
    let root = tree.root();
    items.push(CenterAnnotation {
        cost_decrease: Decrease::Infinite,
        center: center[root],
        parent_center: None,
        node: root,
        subtree_cost: cost[root],
        attach_cost: 0.0,
        self_cost: self_cost(center[root]),
        size: tree.n_points(),
        rank: 0,
    });
    Annotations::new(objective, tree.n_points(), items)
}

/// Cost-decrease of every tree node: the drop in cost when a node's subtree
/// gets its own best center instead of being served from its parent's value.
/// The root is [`Decrease::Infinite`].
pub fn node_cost_decreases(tree: &LcaTree, objective: Objective) -> Result<Vec<Decrease>, HierarchyError> {
    objective.check()?;
    validate(tree).into_result()?;
    let mut cost = vec![0.0f64; tree.len()];
    for node in tree.postorder() {
        let dv = tree.value(node);
        cost[node] = if tree.is_leaf(node) {
            objective.apply(dv)
        } else {
            match objective {
                Objective::Center => dv,
                Objective::Power(_) => {
                    let size = tree.subtree_size(node);
                    tree.children(node)
                        .iter()
                        .map(|&c| cost[c] + objective.many(size - tree.subtree_size(c), dv))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        };
    }
    Ok((0..tree.len())
        .map(|node| match tree.parent(node) {
            None => Decrease::Infinite,
            Some(p) => Decrease::Finite(match objective {
                Objective::Center => tree.value(p),
                Objective::Power(_) => {
                    (objective.many(tree.subtree_size(node), tree.value(p)) - cost[node]).max(0.0)
                }
            }),
        })
        .collect())
}

/// [`kz_annotate`] for the `k`-center objective: cost-decreases are the
/// trigger costs, the value of the node a subtree hangs from.
pub fn kcenter_annotate(tree: &LcaTree) -> Result<Annotations, HierarchyError> {
    kz_annotate(tree, Objective::Center)
}

/// One entry of the optimal `k`-center placement order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCenterStep {
    pub node: NodeId,
    pub center: usize,
    /// Cost at which this center becomes worth placing; infinite for the first.
    pub trigger: Decrease,
}

/// Corresponding centers sorted by trigger cost, root first. The first `k`
/// entries are an optimal `k`-center solution for every `k`.
pub fn kcenter_order(tree: &LcaTree) -> Result<Vec<KCenterStep>, HierarchyError> {
    Ok(kcenter_annotate(tree)?
        .items()
        .iter()
        .map(|a| KCenterStep {
            node: a.node,
            center: a.center,
            trigger: a.cost_decrease,
        })
        .collect())
}

/// An optimal `k`-center clustering and its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct KCenterSolution {
    pub partition: Partition,
    pub cost: f64,
}

/// Places the first `k` centers of [`kcenter_order`], marks each center's
/// path to the root and assigns every point to the center that marked its
/// lowest marked ancestor.
pub fn kcenter_solution(tree: &LcaTree, k: usize) -> Result<KCenterSolution, HierarchyError> {
    let n = tree.n_points();
    if k == 0 || k > n {
        return Err(HierarchyError::KOutOfRange { k, n });
    }
    let order = kcenter_order(tree)?;
    let mut owner: Vec<Option<usize>> = vec![None; tree.len()];
    let centers: Vec<usize> = order[..k].iter().map(|s| s.center).collect();
    for &c in &centers {
        for node in tree.ancestors(c) {
            if owner[node].is_some() {
                break;
            }
            owner[node] = Some(c);
        }
    }
    // Top-down: unmarked nodes inherit the owner and the distance of their
    // lowest marked ancestor.
    let mut assigned = vec![0usize; tree.len()];
    let mut reach = vec![0.0f64; tree.len()];
    let mut cost = 0.0f64;
    for node in tree.preorder() {
        match owner[node] {
            Some(c) => {
                assigned[node] = c;
                reach[node] = tree.value(node);
            }
            None => {
                let p = tree.parent(node).expect("the root is always marked");
                assigned[node] = assigned[p];
                reach[node] = reach[p];
            }
        }
        if tree.is_leaf(node) {
            cost = cost.max(reach[node]);
        }
    }
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); k];
    let slot: std::collections::HashMap<usize, usize> = centers.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for p in 0..n {
        clusters[slot[&assigned[p]]].push(p);
    }
    Ok(KCenterSolution {
        partition: Partition::from_clusters(n, clusters, Some(centers)),
        cost,
    })
}

/// Re-points the parent center of not-yet-placed subtrees to the
/// Euclidean-closest center among those whose root path they hang from.
///
/// Such subtrees are at the same tree distance from every one of those
/// centers, so no objective value changes; only which cluster absorbs them
/// before they split off. Without points the annotations come back as is.
pub fn optimize_annotations(
    annotations: &Annotations,
    tree: &LcaTree,
    points: Option<&PointSet>,
) -> Result<Annotations, HierarchyError> {
    let Some(points) = points else {
        return Ok(annotations.clone());
    };
    if points.len() != tree.n_points() {
        return Err(HierarchyError::PointCountMismatch {
            points: points.len(),
            leaves: tree.n_points(),
        });
    }
    if annotations.n_points() != tree.n_points() {
        return Err(HierarchyError::AnnotationCount {
            expected: tree.n_points(),
            found: annotations.n_points(),
        });
    }
    let dim = points.dim();
    let len = tree.len();
    let mut sums = vec![0.0f64; len * dim];
    for node in tree.postorder() {
        if tree.is_leaf(node) {
            sums[node * dim..(node + 1) * dim].copy_from_slice(points.point(node));
        } else {
            for &c in tree.children(node) {
                for a in 0..dim {
                    sums[node * dim + a] += sums[c * dim + a];
                }
            }
        }
    }
    let sq_to = |node: NodeId, p: usize| -> f64 {
        let size = tree.subtree_size(node) as f64;
        points
            .point(p)
            .iter()
            .enumerate()
            .map(|(a, x)| {
                let d = sums[node * dim + a] / size - x;
                d * d
            })
            .sum()
    };

    let mut items = annotations.items().to_vec();
    let mut by_node: Vec<Option<usize>> = vec![None; len];
    for (i, a) in items.iter().enumerate() {
        if a.parent_center.is_some() {
            by_node[a.node] = Some(i);
        }
    }
    let mut marked = vec![false; len];
    for idx in 0..items.len() {
        let c = items[idx].center;
        for node in tree.ancestors(c) {
            marked[node] = true;
            for &ch in tree.children(node) {
                if marked[ch] {
                    continue;
                }
                let Some(ai) = by_node[ch] else { continue };
                let current = items[ai].parent_center.expect("non-root annotation");
                if current != c && sq_to(ch, c) < sq_to(ch, current) {
                    items[ai].parent_center = Some(c);
                }
            }
        }
    }
    Ok(Annotations {
        objective: annotations.objective(),
        n_points: annotations.n_points(),
        items,
    })
}

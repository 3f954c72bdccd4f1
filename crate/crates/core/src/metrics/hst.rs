use std::collections::HashMap;

use super::points::PointSet;
use crate::error::MetricError;
use crate::ultra::{LcaTree, NodeId, RawNode};

/// Deepest supported subdivision level. Cell coordinates are kept in `u64`.
pub const MAX_HST_DEPTH: u32 = 60;

struct Task {
    id: NodeId,
    group: Vec<usize>,
    level: u32,
}

/// Quadtree-style hierarchically well-separated tree as an LCA-tree.
///
/// The bounding hypercube is split at the midpoint of every axis at once, down
/// to `max_depth` levels. Empty cells are dropped and cells with a single
/// non-empty child are contracted. A node takes the diameter of the smallest
/// cell holding all of its points, which is twice its tree distance to any of
/// its leaves. Leaves have value 0.
pub fn build_hst_tree(points: &PointSet, max_depth: u32) -> Result<LcaTree, MetricError> {
    if max_depth == 0 {
        return Err(MetricError::ZeroDepth);
    }
    if max_depth > MAX_HST_DEPTH {
        return Err(MetricError::DepthTooLarge {
            depth: max_depth,
            max: MAX_HST_DEPTH,
        });
    }
    let n = points.len();
    if n == 1 {
        return Ok(LcaTree::singleton(0.0));
    }
    let dim = points.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points.iter() {
        for a in 0..dim {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let side = (0..dim).map(|a| hi[a] - lo[a]).fold(0.0, f64::max);

    let mut raw: Vec<RawNode> = (0..n)
        .map(|_| RawNode {
            value: 0.0,
            parent: None,
            children: Vec::new(),
        })
        .collect();
    let root = n;
    raw.push(RawNode {
        value: 0.0,
        parent: None,
        children: Vec::new(),
    });
    if side == 0.0 {
        for i in 0..n {
            raw[i].parent = Some(root);
            raw[root].children.push(i);
        }
        return Ok(LcaTree::from_raw(raw, root, n).expect("star is well formed"));
    }

    let diameter = |level: u32| side * (dim as f64).sqrt() * 0.5f64.powi(level as i32);
    let cell = |i: usize, level: u32| -> Vec<u64> {
        let cells = 1u64 << level;
        points
            .point(i)
            .iter()
            .zip(&lo)
            .map(|(&x, &l)| (((x - l) / side * cells as f64).floor() as u64).min(cells - 1))
            .collect()
    };

    let mut stack = vec![Task {
        id: root,
        group: (0..n).collect(),
        level: 0,
    }];
    while let Some(Task { id, group, mut level }) = stack.pop() {
        let parts = loop {
            if level == max_depth {
                break group.iter().map(|&i| vec![i]).collect::<Vec<_>>();
            }
            let parts = split(&group, |i| cell(i, level + 1));
            if parts.len() > 1 {
                break parts;
            }
            level += 1;
        };
        raw[id].value = diameter(level);
        for part in parts {
            let child = if part.len() == 1 {
                part[0]
            } else {
                let c = raw.len();
                raw.push(RawNode {
                    value: 0.0,
                    parent: None,
                    children: Vec::new(),
                });
                stack.push(Task {
                    id: c,
                    group: part,
                    level: level + 1,
                });
                c
            };
            raw[child].parent = Some(id);
            raw[id].children.push(child);
        }
    }
    Ok(LcaTree::from_raw(raw, root, n).expect("cell tree is well formed"))
}

// Groups points by key, in order of first appearance. `group` is ascending,
// so parts come out ordered by their smallest point.
fn split(group: &[usize], key: impl Fn(usize) -> Vec<u64>) -> Vec<Vec<usize>> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for &i in group {
        let slot = *index.entry(key(i)).or_insert_with(|| {
            parts.push(Vec::new());
            parts.len() - 1
        });
        parts[slot].push(i);
    }
    parts
}

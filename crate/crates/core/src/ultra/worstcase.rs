use super::tree::{LcaTree, TreeBuilder};
use crate::error::TreeError;

/// Default node cap for [`make_worstcase_tree`]: depth 24, about 33 million nodes.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 25;

/// Complete binary tree of depth `w` with distinct values assigned by a
/// counter that runs level by level from the leaves upward. The root takes
/// `2^(w+1)` instead of its counter value.
///
/// Every node triggers a different k-center cost, which makes this the
/// slowest input for sorting the center order.
pub fn make_worstcase_tree(w: u32) -> Result<LcaTree, TreeError> {
    make_worstcase_tree_with_budget(w, DEFAULT_NODE_BUDGET)
}

pub fn make_worstcase_tree_with_budget(w: u32, budget: usize) -> Result<LcaTree, TreeError> {
    if w == 0 {
        return Err(TreeError::InvalidParameter("depth must be at least 1"));
    }
    let nodes = 1usize
        .checked_shl(w + 1)
        .filter(|&x| x > 0)
        .map(|x| x - 1)
        .unwrap_or(usize::MAX);
    if w >= usize::BITS - 1 || nodes > budget {
        return Err(TreeError::Budget { nodes, budget });
    }

    let leaves = 1usize << w;
    let leaf_values: Vec<f64> = (1..=leaves).map(|v| v as f64).collect();
    let mut b = TreeBuilder::new(&leaf_values);
    let mut counter = leaves;
    let mut level: Vec<usize> = (0..leaves).collect();
    while level.len() > 1 {
        let is_root = level.len() == 2;
        level = level
            .chunks(2)
            .map(|pair| {
                counter += 1;
                let value = if is_root { (2 * leaves) as f64 } else { counter as f64 };
                b.internal(value, pair)
            })
            .collect();
    }
    Ok(b.finish(level[0])?)
}

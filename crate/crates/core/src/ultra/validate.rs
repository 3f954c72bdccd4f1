use std::fmt;

use super::tree::{LcaTree, NodeId};

/// A broken relaxed-ultrametric condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A leaf value is negative or NaN.
    NegativeLeaf { node: NodeId, value: f64 },
    /// A node's value exceeds its parent's value.
    NotMonotone {
        child: NodeId,
        parent: NodeId,
        child_value: f64,
        parent_value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NegativeLeaf { node, value } => {
                write!(f, "leaf {node} has negative value {value}")
            }
            Violation::NotMonotone {
                child,
                parent,
                child_value,
                parent_value,
            } => write!(f, "({child}, {parent}): {child_value} > {parent_value}"),
        }
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<(), crate::error::TreeError> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(crate::error::TreeError::Invalid(self.violations))
        }
    }
}

/// Checks that leaf values are non-negative and that values never decrease
/// from a node to its parent. Together these make the LCA-distance a relaxed
/// ultrametric.
///
/// Structural problems are caught earlier, when the tree is built.
pub fn validate(tree: &LcaTree) -> ValidationReport {
    let mut violations = Vec::new();
    for (id, node) in tree.nodes().iter().enumerate() {
        let v = node.value();
        if node.is_leaf() && (v.is_nan() || v < 0.0) {
            violations.push(Violation::NegativeLeaf { node: id, value: v });
        }
        if let Some(p) = node.parent() {
            let pv = tree.value(p);
            if v.is_nan() || pv.is_nan() || v > pv {
                violations.push(Violation::NotMonotone {
                    child: id,
                    parent: p,
                    child_value: v,
                    parent_value: pv,
                });
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t4;

    #[test]
    fn t4_is_valid() {
        assert!(validate(&t4()).is_ok());
    }

    #[test]
    fn raised_inner_node_breaks_monotonicity() {
        let t = t4();
        let mut values: Vec<f64> = t.nodes().iter().map(|n| n.value()).collect();
        values[4] = 6.0;
        let report = validate(&t.with_values(&values).unwrap());
        assert_eq!(
            report.violations,
            vec![Violation::NotMonotone {
                child: 4,
                parent: 6,
                child_value: 6.0,
                parent_value: 5.0
            }]
        );
        assert_eq!(report.violations[0].to_string(), "(4, 6): 6 > 5");
    }

    #[test]
    fn negative_leaf() {
        let t = t4();
        let mut values: Vec<f64> = t.nodes().iter().map(|n| n.value()).collect();
        values[0] = -1.0;
        let report = validate(&t.with_values(&values).unwrap());
        assert_eq!(
            report.violations,
            vec![Violation::NegativeLeaf { node: 0, value: -1.0 }]
        );
    }

    #[test]
    fn nan_is_rejected() {
        let t = t4();
        let mut values: Vec<f64> = t.nodes().iter().map(|n| n.value()).collect();
        values[5] = f64::NAN;
        assert!(!validate(&t.with_values(&values).unwrap()).is_ok());
    }
}

use std::sync::OnceLock;

use ship_core::error::HierarchyError;
use ship_core::hierarchy::{hierarchy_for, ClusterHierarchy, Objective, MAX_POWER};
use ship_core::partition::elbow_index;
use ship_core::{Error, LcaTree, PointSet};

/// A fitted tree, optional point data, and hierarchies derived on demand.
///
/// Each hierarchy is computed at most once; concurrent first requests for
/// the same objective wait for the one that got there first.
#[derive(Debug)]
pub struct Session {
    tree: LcaTree,
    points: Option<PointSet>,
    // Slot 0 is k-center, slot z is power z.
    hierarchies: Vec<OnceLock<Result<ClusterHierarchy, HierarchyError>>>,
}

impl Session {
    pub fn new(tree: LcaTree, points: Option<PointSet>) -> Result<Self, String> {
        if let Some(p) = &points {
            if p.len() != tree.n_points() {
                return Err(format!("points file has {} rows but the tree has {} leaves", p.len(), tree.n_points()));
            }
        }
        Ok(Session {
            tree,
            points,
            hierarchies: (0..=MAX_POWER).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn tree(&self) -> &LcaTree {
        &self.tree
    }

    pub fn points(&self) -> Option<&PointSet> {
        self.points.as_ref()
    }

    pub fn hierarchy(&self, objective: Objective) -> Result<&ClusterHierarchy, Error> {
        let slot = match objective {
            Objective::Center => 0,
            Objective::Power(z) => Objective::power(z).map(|_| z as usize)?,
        };
        let built = self.hierarchies[slot].get_or_init(|| {
            log::debug!("building {objective} hierarchy");
            hierarchy_for(&self.tree, objective)
        });
        built.as_ref().map_err(|e| e.clone().into())
    }

    /// Elbow of the loss curve for each power.
    pub fn elbows(&self, powers: &[u32]) -> Result<Vec<(u32, usize)>, Error> {
        powers
            .iter()
            .map(|&z| {
                let h = self.hierarchy(Objective::power(z)?)?;
                Ok((z, elbow_index(h.curve())?))
            })
            .collect()
    }
}

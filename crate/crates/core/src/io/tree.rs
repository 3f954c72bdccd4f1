use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_schema, create, open};
use crate::error::{Error, FormatError};
use crate::hierarchy::{ClusterHierarchy, HierNodeParts, Objective};
use crate::ultra::{validate, LcaTree, RawNode};

pub const TREE_SCHEMA: &str = "ship-tree/1";
pub const HIERARCHY_SCHEMA: &str = "ship-hier/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNodeFile {
    pub value: f64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub size: usize,
}

/// On-disk form of an [`LcaTree`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeFile {
    pub schema: String,
    pub n_points: usize,
    pub root: usize,
    pub nodes: Vec<TreeNodeFile>,
    pub leaf_order: Vec<usize>,
}

impl TreeFile {
    pub fn from_tree(tree: &LcaTree) -> Self {
        TreeFile {
            schema: TREE_SCHEMA.into(),
            n_points: tree.n_points(),
            root: tree.root(),
            nodes: tree
                .nodes()
                .iter()
                .map(|n| TreeNodeFile {
                    value: n.value(),
                    parent: n.parent(),
                    children: n.children().to_vec(),
                    size: n.subtree_size(),
                })
                .collect(),
            leaf_order: tree.leaf_order().to_vec(),
        }
    }

    /// Rebuilds the tree, checking structure, the stored sizes and leaf
    /// order, and the ultrametric conditions.
    pub fn into_tree(self) -> Result<LcaTree, Error> {
        check_schema(&self.schema, TREE_SCHEMA)?;
        let sizes: Vec<usize> = self.nodes.iter().map(|n| n.size).collect();
        let raw = self
            .nodes
            .into_iter()
            .map(|n| RawNode {
                value: n.value,
                parent: n.parent,
                children: n.children,
            })
            .collect();
        let tree = LcaTree::from_raw(raw, self.root, self.n_points)?;
        if let Some(i) = (0..tree.len()).find(|&i| tree.subtree_size(i) != sizes[i]) {
            return Err(FormatError::Value(format!("node {i}: stored size disagrees with the tree")).into());
        }
        if tree.leaf_order() != self.leaf_order.as_slice() {
            return Err(FormatError::Value("stored leaf order disagrees with the tree".into()).into());
        }
        validate(&tree).into_result()?;
        Ok(tree)
    }
}

pub fn write_tree<W: Write>(w: W, tree: &LcaTree) -> Result<(), FormatError> {
    serde_json::to_writer(w, &TreeFile::from_tree(tree))?;
    Ok(())
}

pub fn read_tree<R: Read>(r: R) -> Result<LcaTree, Error> {
    let file: TreeFile = serde_json::from_reader(r).map_err(FormatError::from)?;
    file.into_tree()
}

pub fn save_tree(path: impl AsRef<Path>, tree: &LcaTree) -> Result<(), FormatError> {
    let mut w = create(path.as_ref())?;
    write_tree(&mut w, tree)?;
    w.flush()?;
    Ok(())
}

pub fn load_tree(path: impl AsRef<Path>) -> Result<LcaTree, Error> {
    read_tree(open(path.as_ref())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierNodeFile {
    pub center: usize,
    pub split_k: usize,
    pub cost: f64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub span: (usize, usize),
    pub continues_parent: bool,
}

/// On-disk form of a [`ClusterHierarchy`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyFile {
    pub schema: String,
    pub objective: String,
    pub n_points: usize,
    pub nodes: Vec<HierNodeFile>,
    pub losses: Vec<f64>,
}

impl HierarchyFile {
    pub fn from_hierarchy(h: &ClusterHierarchy) -> Self {
        HierarchyFile {
            schema: HIERARCHY_SCHEMA.into(),
            objective: h.objective().to_string(),
            n_points: h.n_points(),
            nodes: h
                .nodes()
                .iter()
                .map(|n| HierNodeFile {
                    center: n.center,
                    split_k: n.split_k,
                    cost: n.cost,
                    parent: n.parent,
                    children: n.children.clone(),
                    span: n.span,
                    continues_parent: n.continues_parent,
                })
                .collect(),
            losses: h.curve().losses().to_vec(),
        }
    }

    pub fn into_hierarchy(self) -> Result<ClusterHierarchy, Error> {
        check_schema(&self.schema, HIERARCHY_SCHEMA)?;
        let objective: Objective = self.objective.parse().map_err(FormatError::Value)?;
        let spans: Vec<(usize, usize)> = self.nodes.iter().map(|n| n.span).collect();
        let parts = self
            .nodes
            .into_iter()
            .map(|n| HierNodeParts {
                center: n.center,
                split_k: n.split_k,
                cost: n.cost,
                parent: n.parent,
                children: n.children,
                continues_parent: n.continues_parent,
            })
            .collect();
        let h = ClusterHierarchy::from_parts(objective, self.n_points, parts, self.losses).map_err(FormatError::Value)?;
        if let Some(i) = (0..h.len()).find(|&i| h.node(i).span != spans[i]) {
            return Err(FormatError::Value(format!("node {i}: stored span disagrees with the hierarchy")).into());
        }
        Ok(h)
    }
}

pub fn write_hierarchy<W: Write>(w: W, h: &ClusterHierarchy) -> Result<(), FormatError> {
    serde_json::to_writer(w, &HierarchyFile::from_hierarchy(h))?;
    Ok(())
}

pub fn read_hierarchy<R: Read>(r: R) -> Result<ClusterHierarchy, Error> {
    let file: HierarchyFile = serde_json::from_reader(r).map_err(FormatError::from)?;
    file.into_hierarchy()
}

pub fn save_hierarchy(path: impl AsRef<Path>, h: &ClusterHierarchy) -> Result<(), FormatError> {
    let mut w = create(path.as_ref())?;
    write_hierarchy(&mut w, h)?;
    w.flush()?;
    Ok(())
}

pub fn load_hierarchy(path: impl AsRef<Path>) -> Result<ClusterHierarchy, Error> {
    read_hierarchy(open(path.as_ref())?)
}

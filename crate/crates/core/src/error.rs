use thiserror::Error;

use crate::ultra::{NodeId, Violation};

/// The arena does not describe a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("tree has no nodes")]
    Empty,
    #[error("tree declares {n_points} points but has only {nodes} nodes")]
    TooFewNodes { n_points: usize, nodes: usize },
    #[error("node {node} references node {target}, which does not exist")]
    DanglingIndex { node: NodeId, target: NodeId },
    #[error("root {0} has a parent")]
    RootHasParent(NodeId),
    #[error("node {child} is listed under {parent} but records parent {recorded:?}")]
    ParentMismatch {
        child: NodeId,
        parent: NodeId,
        recorded: Option<NodeId>,
    },
    #[error("node {0} is listed as a child more than once")]
    SharedChild(NodeId),
    #[error("node {0} is not reachable from the root")]
    Orphan(NodeId),
    #[error("parent chain starting at node {0} is cyclic")]
    Cycle(NodeId),
    #[error("node {0} is a leaf but sits outside the leaf slots 0..n_points")]
    MisplacedLeaf(NodeId),
    #[error("leaf slot {0} has children")]
    LeafWithChildren(NodeId),
    #[error("internal node {0} has fewer than two children")]
    UnderfullNode(NodeId),
    #[error("recorded {what} for node {node} disagrees with the tree")]
    Inconsistent { node: NodeId, what: &'static str },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("tree violates the relaxed-ultrametric conditions: {}", first_violation(.0))]
    Invalid(Vec<Violation>),
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("dissimilarity is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("dissimilarity ({i}, {j}) = {value} is negative or not finite")]
    BadEntry { i: usize, j: usize, value: f64 },
    #[error("strong triangle inequality fails on ({}, {}, {}): d = {} > max({}, {})",
        .triple.0, .triple.2, .triple.1, .distances.0, .distances.1, .distances.2)]
    NotUltrametric {
        /// `(a, b, c)` with `d(a, c) > max(d(a, b), d(b, c))`.
        triple: (usize, usize, usize),
        /// `(d(a, c), d(a, b), d(b, c))`.
        distances: (f64, f64, f64),
    },
    #[error("need at least one point")]
    NoPoints,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("tree with {nodes} nodes exceeds the node budget of {budget}")]
    Budget { nodes: usize, budget: usize },
}

fn first_violation(v: &[Violation]) -> String {
    match v.first() {
        Some(first) if v.len() == 1 => first.to_string(),
        Some(first) => format!("{first} (and {} more)", v.len() - 1),
        None => "no violations".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("mu = {mu} out of range for {n} points (need 1 <= mu <= n - 1)")]
    MuOutOfRange { mu: usize, n: usize },
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("need at least one point")]
    Empty,
    #[error("max_depth must be positive")]
    ZeroDepth,
    #[error("max_depth {depth} exceeds the supported maximum of {max}")]
    DepthTooLarge { depth: u32, max: u32 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HierarchyError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("z = {0} unsupported (supported: 1..=8)")]
    UnsupportedPower(u32),
    #[error("k = {k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("center {0} is annotated more than once")]
    DuplicateCenter(usize),
    #[error("no root annotation (exactly one annotation must have no parent center)")]
    MissingRoot,
    #[error("more than one annotation has no parent center")]
    MultipleRoots,
    #[error("annotation for center {0} has an unusable cost-decrease (the root must be infinite, all others finite and non-negative)")]
    BadDecrease(usize),
    #[error("center {center} out of range for {n} points")]
    CenterOutOfRange { center: usize, n: usize },
    #[error("annotation for center {center} refers to parent center {parent}, which is not placed before it")]
    UnplacedParent { center: usize, parent: usize },
    #[error("expected {expected} annotations, found {found}")]
    AnnotationCount { expected: usize, found: usize },
    #[error("point set has {points} points but the tree has {leaves} leaves")]
    PointCountMismatch { points: usize, leaves: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error("cost curve has {0} entries; the elbow needs at least 3")]
    CurveTooShort(usize),
    #[error("threshold must be non-negative, got {0}")]
    NegativeThreshold(f64),
    #[error("median of elbows needs at least one z")]
    NoPowers,
    #[error("minimum cluster size must be at least 1")]
    ZeroMinClusterSize,
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("center set is empty")]
    NoCenters,
    #[error("{n} points exceeds the exhaustive-search budget of {budget}")]
    Budget { n: usize, budget: usize },
    #[error("edge list does not connect all {n} points")]
    Disconnected { n: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Errors raised while reading or writing persisted data.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("expected schema {expected:?}, found {found:?}")]
    Schema { expected: &'static str, found: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {detail}")]
    BadRow { row: usize, detail: String },
    #[error("input exceeds the {what} limit of {limit}")]
    Limit { what: &'static str, limit: usize },
    #[error("invalid value: {0}")]
    Value(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl From<StructureError> for Error {
    fn from(e: StructureError) -> Self {
        Error::Tree(TreeError::Structure(e))
    }
}

//! Optimal center-based clustering over relaxed ultrametrics.
//!
//! A relaxed ultrametric is stored as an [`LcaTree`]: the dissimilarity of two
//! points is the value of their lowest common ancestor, and a point's
//! self-dissimilarity is the value of its leaf. Over such a tree every
//! `k`-center, `k`-median and `k`-means solution (and more generally every
//! `(k, z)`-clustering solution) can be read off a single sorted list of
//! annotations, and the solutions for consecutive `k` are nested.
//!
//! The crate is organised as follows:
//!
//! * [`ultra`]: the tree, its validation, construction from a dissimilarity
//!   matrix, and constant-time leaf spans.
//! * [`metrics`]: relaxed ultrametrics fitted to point data (the
//!   density-connectivity distance and an axis-aligned HST).
//! * [`hierarchy`]: corresponding centers, cost-decrease annotations, the
//!   cluster hierarchy and per-`k` partitions.
//! * [`partition`]: elbow, median-of-elbows, thresholding and stability
//!   selection.
//! * [`oracle`]: exhaustive reference implementations used for verification.
//! * [`io`]: JSON/CSV persistence.
//!
//! ```
//! use ship_core::fixtures::t4;
//! use ship_core::hierarchy::{kz_annotate, build_hierarchy, extract_partition, Objective};
//!
//! let tree = t4();
//! let annotations = kz_annotate(&tree, Objective::power(1).unwrap()).unwrap();
//! let hierarchy = build_hierarchy(&annotations).unwrap();
//! assert_eq!(hierarchy.curve().losses(), &[12.0, 5.0, 2.0, 0.0]);
//!
//! let two = extract_partition(&hierarchy, 2).unwrap();
//! assert_eq!(two.labels(), &[Some(0), Some(0), Some(1), Some(1)]);
//! ```

pub mod error;
pub mod fixtures;
pub mod hierarchy;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod par;
pub mod partition;
pub mod ultra;

pub use error::Error;
pub use hierarchy::{ClusterHierarchy, CostCurve, Objective};
pub use metrics::PointSet;
pub use par::Exec;
pub use partition::Partition;
pub use ultra::{LcaTree, NodeId};

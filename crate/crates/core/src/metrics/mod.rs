//! Relaxed ultrametrics fitted to Euclidean point data.

mod dc;
mod hst;
mod points;

pub use dc::{build_dc_tree, core_distances, fit_dc, mutual_reachability, CoreDistances, DcFit, MutualReachability};
pub use hst::{build_hst_tree, MAX_HST_DEPTH};
pub use points::PointSet;

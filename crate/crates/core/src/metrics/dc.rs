use super::points::PointSet;
use crate::error::{Error, MetricError};
use crate::par::Exec;
use crate::ultra::{minimax_tree, prim_mst, Dissimilarity, Edge, LcaTree};

/// Per-point core distances for one `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreDistances {
    pub mu: usize,
    pub kappa: Vec<f64>,
}

/// Distance from each point to its `mu`-th nearest other point.
pub fn core_distances(points: &PointSet, mu: usize, exec: Exec) -> Result<CoreDistances, MetricError> {
    let n = points.len();
    if mu == 0 || mu >= n {
        return Err(MetricError::MuOutOfRange { mu, n });
    }
    let kappa = exec.map(n, |i| {
        // The mu smallest squared distances seen so far, ascending.
        let mut best: Vec<f64> = Vec::with_capacity(mu + 1);
        for j in (0..n).filter(|&j| j != i) {
            let d = points.sq_dist(i, j);
            if best.len() == mu && d >= best[mu - 1] {
                continue;
            }
            let pos = best.partition_point(|&b| b <= d);
            best.insert(pos, d);
            best.truncate(mu);
        }
        best[mu - 1].sqrt()
    });
    Ok(CoreDistances { mu, kappa })
}

/// `max(d(i, j), κ(i), κ(j))`, and `κ(i)` on the diagonal.
pub fn mutual_reachability(points: &PointSet, core: &CoreDistances, i: usize, j: usize) -> f64 {
    MutualReachability { points, core: &core.kappa }.get(i, j)
}

/// Mutual reachability as a [`Dissimilarity`].
#[derive(Debug, Clone, Copy)]
pub struct MutualReachability<'a> {
    pub points: &'a PointSet,
    pub core: &'a [f64],
}

impl Dissimilarity for MutualReachability<'_> {
    fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.core[i];
        }
        self.points.dist(i, j).max(self.core[i]).max(self.core[j])
    }
}

/// Everything computed while fitting the density-connectivity distance.
#[derive(Debug, Clone)]
pub struct DcFit {
    pub tree: LcaTree,
    pub core: CoreDistances,
    pub mst: Vec<Edge>,
}

/// Fits the density-connectivity distance: the bottleneck distance over a
/// minimum spanning tree of mutual reachabilities, with each point's core
/// distance as its self-distance.
///
/// A single point yields one leaf of value 0.
pub fn fit_dc(points: &PointSet, mu: usize, exec: Exec) -> Result<DcFit, Error> {
    let n = points.len();
    if n == 1 {
        if mu == 0 {
            return Err(MetricError::MuOutOfRange { mu, n }.into());
        }
        return Ok(DcFit {
            tree: LcaTree::singleton(0.0),
            core: CoreDistances { mu, kappa: vec![0.0] },
            mst: Vec::new(),
        });
    }
    let core = core_distances(points, mu, exec)?;
    let mr = MutualReachability {
        points,
        core: &core.kappa,
    };
    let mst = prim_mst(&mr, exec);
    let tree = minimax_tree(&core.kappa, &mst)?;
    Ok(DcFit { tree, core, mst })
}

/// The LCA-tree of the density-connectivity distance. See [`fit_dc`].
pub fn build_dc_tree(points: &PointSet, mu: usize, exec: Exec) -> Result<LcaTree, Error> {
    fit_dc(points, mu, exec).map(|f| f.tree)
}

//! Exhaustive reference implementations. Slow on purpose; for tests only.

use crate::error::OracleError;
use crate::hierarchy::Objective;
use crate::partition::Partition;
use crate::ultra::{Edge, LcaTree};

/// Default cap on `n` for [`brute_optimum`].
pub const DEFAULT_BRUTE_BUDGET: usize = 14;

/// Result of an exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub cost: f64,
    /// One optimal center set, sorted.
    pub centers: Vec<usize>,
    /// Number of center sets attaining `cost`.
    pub count: usize,
}

// Integer-valued trees are costed in i128 so sums carry no rounding.
enum Dist {
    Int(Vec<i128>),
    Float(Vec<f64>),
}

fn distances(tree: &LcaTree) -> Dist {
    let m = tree.distance_matrix();
    let integral = m.iter().all(|v| v.fract() == 0.0 && v.abs() < 9.0e15);
    if integral {
        Dist::Int(m.iter().map(|&v| v as i128).collect())
    } else {
        Dist::Float(m)
    }
}

fn int_pow(x: i128, objective: Objective) -> Option<i128> {
    match objective {
        Objective::Center => Some(x),
        Objective::Power(z) => x.checked_pow(z),
    }
}

fn cost_int(d: &[i128], n: usize, centers: &[usize], objective: Objective) -> Option<i128> {
    let mut total: i128 = 0;
    for p in 0..n {
        let best = centers.iter().map(|&c| d[p * n + c]).min()?;
        let term = int_pow(best, objective)?;
        total = match objective {
            Objective::Center => total.max(term),
            Objective::Power(_) => total.checked_add(term)?,
        };
    }
    Some(total)
}

fn cost_float(d: &[f64], n: usize, centers: &[usize], objective: Objective) -> f64 {
    let mut total = 0.0f64;
    for p in 0..n {
        let best = centers.iter().map(|&c| d[p * n + c]).fold(f64::INFINITY, f64::min);
        total = objective.combine(total, objective.apply(best));
    }
    total
}

fn check_centers(n: usize, centers: &[usize]) -> Result<(), OracleError> {
    if centers.is_empty() {
        return Err(OracleError::NoCenters);
    }
    if let Some(&c) = centers.iter().find(|&&c| c >= n) {
        return Err(crate::error::TreeError::IndexOutOfRange {
            what: "center",
            index: c,
            len: n,
        }
        .into());
    }
    Ok(())
}

fn cost_with(d: &Dist, n: usize, centers: &[usize], objective: Objective) -> f64 {
    match d {
        Dist::Int(m) => match cost_int(m, n, centers, objective) {
            Some(c) => c as f64,
            None => {
                let f: Vec<f64> = m.iter().map(|&v| v as f64).collect();
                cost_float(&f, n, centers, objective)
            }
        },
        Dist::Float(m) => cost_float(m, n, centers, objective),
    }
}

/// Cost of serving every point from its nearest center: the sum of `d^z`,
/// or the maximum distance for k-center.
pub fn brute_cost(tree: &LcaTree, centers: &[usize], objective: Objective) -> Result<f64, OracleError> {
    let n = tree.n_points();
    check_centers(n, centers)?;
    Ok(cost_with(&distances(tree), n, centers, objective))
}

/// Cost of a partition when each cluster is served by its own center, not
/// by the nearest one. Noise points are not charged.
pub fn partition_cost(tree: &LcaTree, partition: &Partition, objective: Objective) -> Result<f64, OracleError> {
    let centers = partition.centers().ok_or(OracleError::NoCenters)?;
    let n = tree.n_points();
    check_centers(n, centers)?;
    let mut total = 0.0f64;
    for (p, label) in partition.labels().iter().enumerate() {
        if let Some(l) = label {
            let d = tree.lca_distance(p, centers[*l])?;
            total = objective.combine(total, objective.apply(d));
        }
    }
    Ok(total)
}

/// Minimum cost over every `k`-subset of points, with the default budget.
pub fn brute_optimum(tree: &LcaTree, k: usize, objective: Objective) -> Result<OracleResult, OracleError> {
    brute_optimum_with_budget(tree, k, objective, DEFAULT_BRUTE_BUDGET)
}

pub fn brute_optimum_with_budget(
    tree: &LcaTree,
    k: usize,
    objective: Objective,
    budget: usize,
) -> Result<OracleResult, OracleError> {
    let n = tree.n_points();
    if n > budget {
        return Err(OracleError::Budget { n, budget });
    }
    if k == 0 || k > n {
        return Err(OracleError::NoCenters);
    }
    let d = distances(tree);
    let mut subset: Vec<usize> = (0..k).collect();
    let mut best: Option<OracleResult> = None;
    loop {
        let cost = cost_with(&d, n, &subset, objective);
        match &mut best {
            Some(b) if cost == b.cost => b.count += 1,
            Some(b) if cost > b.cost => {}
            _ => {
                best = Some(OracleResult {
                    cost,
                    centers: subset.clone(),
                    count: 1,
                })
            }
        }
        // Next k-subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(best.expect("at least one subset"));
            }
            i -= 1;
            if subset[i] < n - k + i {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// All-pairs bottleneck distances over a spanning tree given as edges: entry
/// `(i, j)` is the largest edge weight on the path from `i` to `j`, found by
/// walking the path. The diagonal is 0.
pub fn brute_minimax(n: usize, edges: &[Edge]) -> Result<Vec<f64>, OracleError> {
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in edges {
        if e.a >= n || e.b >= n {
            return Err(OracleError::Disconnected { n });
        }
        adj[e.a].push((e.b, e.weight));
        adj[e.b].push((e.a, e.weight));
    }
    let mut out = vec![0.0; n * n];
    for src in 0..n {
        // Parent pointers from `src`, then walk each target back.
        let mut parent: Vec<Option<(usize, f64)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            for &(v, w) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, w));
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(OracleError::Disconnected { n });
        }
        for dst in 0..n {
            let mut worst = 0.0f64;
            let mut at = dst;
            while let Some((p, w)) = parent[at] {
                worst = worst.max(w);
                at = p;
            }
            out[src * n + dst] = worst;
        }
    }
    Ok(out)
}

use std::collections::VecDeque;

use super::mst::{prim_mst, Edge};
use super::tree::{LcaTree, NodeId, RawNode};
use crate::error::TreeError;
use crate::par::Exec;

/// Symmetric pairwise dissimilarity over points `0..len()`.
pub trait Dissimilarity: Sync {
    fn len(&self) -> usize;

    fn get(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Row-major `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self, TreeError> {
        if data.len() != n * n {
            return Err(TreeError::InvalidParameter("matrix data length must be n * n"));
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, TreeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(TreeError::InvalidParameter("matrix must be square"));
        }
        Ok(DenseMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl Dissimilarity for DenseMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Dissimilarity computed on demand by a closure.
pub struct FnDissimilarity<F> {
    n: usize,
    f: F,
}

impl<F: Fn(usize, usize) -> f64 + Sync> FnDissimilarity<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnDissimilarity { n, f }
    }
}

impl<F: Fn(usize, usize) -> f64 + Sync> Dissimilarity for FnDissimilarity<F> {
    fn len(&self) -> usize {
        self.n
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        (self.f)(i, j)
    }
}

/// Builds the LCA-tree of a relaxed ultrametric.
///
/// Leaf values are copied from the diagonal and internal values from
/// off-diagonal entries, so the LCA-distance of the result reproduces `src`
/// exactly. Points that are pairwise equidistant at the same level share a
/// single multi-child node. Children are ordered by their smallest point.
///
/// If `src` is not a relaxed ultrametric, the error names a triple
/// `(a, b, c)` with `d(a, c) > max(d(a, b), d(b, c))`.
pub fn build_from_dissimilarity<D: Dissimilarity + ?Sized>(src: &D) -> Result<LcaTree, TreeError> {
    let n = src.len();
    if n == 0 {
        return Err(TreeError::NoPoints);
    }
    for i in 0..n {
        for j in i..n {
            let v = src.get(i, j);
            if !(v.is_finite() && v >= 0.0) {
                return Err(TreeError::BadEntry { i, j, value: v });
            }
            if src.get(j, i) != v {
                return Err(TreeError::Asymmetric { i, j });
            }
        }
    }
    for i in 0..n {
        let own = src.get(i, i);
        for j in (0..n).filter(|&j| j != i) {
            let cross = src.get(i, j);
            if own > cross {
                return Err(TreeError::NotUltrametric {
                    triple: (i, j, i),
                    distances: (own, cross, cross),
                });
            }
        }
    }

    let edges = prim_mst(src, Exec::Sequential);
    let diag: Vec<f64> = (0..n).map(|i| src.get(i, i)).collect();
    let tree = minimax_tree(&diag, &edges)?;

    let got = tree.distance_matrix();
    for i in 0..n {
        for j in i + 1..n {
            if got[i * n + j] != src.get(i, j) {
                return Err(witness(src, &edges, i, j));
            }
        }
    }
    Ok(tree)
}

// The tree value of (i, j) is the largest edge on the spanning-tree path, which
// is below d(i, j). Walking the path from i, the direct distance must jump
// above both the previous direct distance and the next edge somewhere.
fn witness<D: Dissimilarity + ?Sized>(src: &D, edges: &[Edge], i: usize, j: usize) -> TreeError {
    let path = tree_path(src.len(), edges, i, j);
    for w in path.windows(2).skip(1) {
        let (b, c) = (w[0], w[1]);
        let (ab, bc, ac) = (src.get(i, b), src.get(b, c), src.get(i, c));
        if ac > ab.max(bc) {
            return TreeError::NotUltrametric {
                triple: (i, b, c),
                distances: (ac, ab, bc),
            };
        }
    }
    unreachable!("a mismatch between minimax and direct distance always has a witness")
}

fn tree_path(n: usize, edges: &[Edge], from: usize, to: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    let mut prev = vec![usize::MAX; n];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &v in &adj[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        let (hi, lo) = if self.rank[a] >= self.rank[b] { (a, b) } else { (b, a) };
        self.parent[lo] = hi;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        hi
    }
}

/// Assembles the LCA-tree whose internal values are the minimax
/// (bottleneck) distances over a spanning tree, with the given leaf values.
///
/// Edges are merged in ascending weight order. When an edge joins a component
/// whose top node already carries exactly the same weight, the other side is
/// attached to that node rather than stacked under a new one.
pub fn minimax_tree(leaf_values: &[f64], edges: &[Edge]) -> Result<LcaTree, TreeError> {
    let n = leaf_values.len();
    if n == 0 {
        return Err(TreeError::NoPoints);
    }
    if edges.len() != n - 1 {
        return Err(TreeError::InvalidParameter("a spanning tree over n points has n - 1 edges"));
    }
    for e in edges {
        for v in [e.a, e.b] {
            if v >= n {
                return Err(TreeError::IndexOutOfRange {
                    what: "edge endpoint",
                    index: v,
                    len: n,
                });
            }
        }
        if !(e.weight.is_finite() && e.weight >= 0.0) {
            return Err(TreeError::BadEntry {
                i: e.a,
                j: e.b,
                value: e.weight,
            });
        }
    }
    if n == 1 {
        return Ok(LcaTree::singleton(leaf_values[0]));
    }

    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&x, &y| edges[x].weight.total_cmp(&edges[y].weight).then(x.cmp(&y)));

    let mut values: Vec<f64> = leaf_values.to_vec();
    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut alive: Vec<bool> = vec![true; n];
    let mut top: Vec<NodeId> = (0..n).collect();
    let mut uf = UnionFind::new(n);

    for &ei in &order {
        let Edge { a, b, weight } = edges[ei];
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            return Err(TreeError::InvalidParameter("edges contain a cycle"));
        }
        let (na, nb) = (top[ra], top[rb]);
        let joins = |node: NodeId| node >= n && values[node] == weight;
        let merged = match (joins(na), joins(nb)) {
            (true, true) => {
                let moved = std::mem::take(&mut children[nb]);
                children[na].extend(moved);
                alive[nb] = false;
                na
            }
            (true, false) => {
                children[na].push(nb);
                na
            }
            (false, true) => {
                children[nb].push(na);
                nb
            }
            (false, false) => {
                values.push(weight);
                children.push(vec![na, nb]);
                alive.push(true);
                values.len() - 1
            }
        };
        let r = uf.union(ra, rb);
        top[r] = merged;
    }
    let root_old = top[uf.find(0)];

    // Compact away absorbed nodes; internal nodes keep creation order, which
    // is bottom-up.
    let mut remap = vec![usize::MAX; values.len()];
    let mut next = 0;
    for (old, &live) in alive.iter().enumerate() {
        if live {
            remap[old] = next;
            next += 1;
        }
    }
    let mut min_point = vec![usize::MAX; next];
    let mut raw: Vec<RawNode> = Vec::with_capacity(next);
    for (old, &live) in alive.iter().enumerate() {
        if !live {
            continue;
        }
        let id = remap[old];
        let mut kids: Vec<NodeId> = children[old].iter().map(|&c| remap[c]).collect();
        if kids.is_empty() {
            min_point[id] = id;
        } else {
            kids.sort_by_key(|&c| min_point[c]);
            min_point[id] = min_point[kids[0]];
        }
        raw.push(RawNode {
            value: values[old],
            parent: None,
            children: kids,
        });
    }
    for id in 0..raw.len() {
        for k in 0..raw[id].children.len() {
            let c = raw[id].children[k];
            raw[c].parent = Some(id);
        }
    }
    Ok(LcaTree::from_raw(raw, remap[root_old], n)?)
}

use std::cmp::Ordering;

use super::build::Dissimilarity;
use crate::par::Exec;

/// Weighted undirected edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy)]
struct Frontier {
    vertex: usize,
    from: usize,
    best: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64, usize, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

// Below this many frontier vertices a parallel scan costs more than it saves.
const PAR_MIN_LEN: usize = 4096;

/// Minimum spanning tree of the complete graph over `d` by Prim's algorithm
/// in `O(n²)` time and `O(n)` memory.
///
/// Ties are broken towards the smaller vertex index, so the result does not
/// depend on `exec`.
pub fn prim_mst<D: Dissimilarity + ?Sized>(d: &D, exec: Exec) -> Vec<Edge> {
    let n = d.len();
    if n < 2 {
        return Vec::new();
    }
    let mut frontier: Vec<Frontier> = (1..n)
        .map(|v| Frontier {
            vertex: v,
            from: 0,
            best: f64::INFINITY,
        })
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    let mut latest = 0usize;
    while !frontier.is_empty() {
        let key = exec
            .update_min(&mut frontier, PAR_MIN_LEN, |pos, f| {
                let w = d.get(latest, f.vertex);
                if w < f.best {
                    f.best = w;
                    f.from = latest;
                }
                Key(f.best, f.vertex, pos)
            })
            .expect("frontier is non-empty");
        let picked = frontier.swap_remove(key.2);
        edges.push(Edge {
            a: picked.from,
            b: picked.vertex,
            weight: picked.best,
        });
        latest = picked.vertex;
    }
    edges
}

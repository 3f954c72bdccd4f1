/// A flat clustering. Labels run `0..k` in order of each cluster's smallest
/// point; `None` marks noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<Option<usize>>,
    centers: Option<Vec<usize>>,
    k: usize,
}

impl Partition {
    /// Builds a partition of `0..n` from disjoint point lists. Points in no
    /// list are noise. `centers[i]`, if given, belongs to `clusters[i]`.
    /// Empty clusters are dropped.
    pub fn from_clusters(n: usize, clusters: Vec<Vec<usize>>, centers: Option<Vec<usize>>) -> Self {
        if let Some(c) = &centers {
            assert_eq!(c.len(), clusters.len(), "one center per cluster");
        }
        let mut keyed: Vec<(usize, usize)> = clusters
            .iter()
            .enumerate()
            .filter_map(|(i, pts)| pts.iter().min().map(|&m| (m, i)))
            .collect();
        keyed.sort_unstable();
        let mut labels = vec![None; n];
        for (label, &(_, i)) in keyed.iter().enumerate() {
            for &p in &clusters[i] {
                debug_assert!(labels[p].is_none(), "clusters overlap at point {p}");
                labels[p] = Some(label);
            }
        }
        let centers = centers.map(|c| keyed.iter().map(|&(_, i)| c[i]).collect());
        Partition {
            labels,
            centers,
            k: keyed.len(),
        }
    }

    /// Relabels arbitrary cluster ids into canonical order.
    pub fn from_labels(raw: &[Option<usize>]) -> Self {
        let mut slot = std::collections::HashMap::new();
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (p, l) in raw.iter().enumerate() {
            if let Some(l) = l {
                let i = *slot.entry(*l).or_insert_with(|| {
                    clusters.push(Vec::new());
                    clusters.len() - 1
                });
                clusters[i].push(p);
            }
        }
        Self::from_clusters(raw.len(), clusters, None)
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    /// Centers in label order, when the method defines them.
    pub fn centers(&self) -> Option<&[usize]> {
        self.centers.as_deref()
    }

    /// Number of clusters, noise excluded.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_points(&self) -> usize {
        self.labels.len()
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    /// Points of each cluster, in label order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (p, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                out[*l].push(p);
            }
        }
        out
    }

    /// Labels with noise as `-1`.
    pub fn signed_labels(&self) -> Vec<i64> {
        self.labels.iter().map(|l| l.map_or(-1, |x| x as i64)).collect()
    }
}

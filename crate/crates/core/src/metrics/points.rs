use crate::error::MetricError;

/// `n` points of equal dimension, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let dim = points.first().ok_or(MetricError::Empty)?.len();
        if dim == 0 {
            return Err(MetricError::ZeroDimension);
        }
        let mut data = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(MetricError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            data.extend(p);
        }
        Self::from_flat(dim, data)
    }

    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self, MetricError> {
        if dim == 0 {
            return Err(MetricError::ZeroDimension);
        }
        if data.is_empty() {
            return Err(MetricError::Empty);
        }
        if !data.len().is_multiple_of(dim) {
            return Err(MetricError::DimensionMismatch {
                index: data.len() / dim,
                expected: dim,
                found: data.len() % dim,
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(MetricError::NonFinite { index: pos / dim });
        }
        Ok(PointSet { dim, data })
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Squared Euclidean distance. Symmetric bit for bit.
    #[inline]
    pub fn sq_dist(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.sq_dist(i, j).sqrt()
    }

    /// Coordinate-wise mean of the given points.
    pub fn mean(&self, indices: &[usize]) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for &i in indices {
            for (acc, x) in m.iter_mut().zip(self.point(i)) {
                *acc += x;
            }
        }
        let k = indices.len().max(1) as f64;
        m.iter_mut().for_each(|x| *x /= k);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed() {
        assert_eq!(PointSet::new(vec![]), Err(MetricError::Empty));
        assert_eq!(PointSet::new(vec![vec![]]), Err(MetricError::ZeroDimension));
        assert!(matches!(
            PointSet::new(vec![vec![1.0, 2.0], vec![1.0]]),
            Err(MetricError::DimensionMismatch { index: 1, expected: 2, found: 1 })
        ));
        assert_eq!(
            PointSet::new(vec![vec![1.0], vec![f64::NAN]]),
            Err(MetricError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn distances_and_means() {
        let p = PointSet::new(vec![vec![0.0, 0.0], vec![3.0, 4.0], vec![6.0, 8.0]]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.dist(0, 1), 5.0);
        assert_eq!(p.sq_dist(1, 2), p.sq_dist(2, 1));
        assert_eq!(p.mean(&[0, 2]), vec![3.0, 4.0]);
    }
}

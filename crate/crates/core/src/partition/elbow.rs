use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, PartitionError};
use crate::hierarchy::{cost_curve, kz_annotate, CostCurve, Objective};
use crate::par::Exec;
use crate::ultra::LcaTree;

/// Angles closer to each other than this count as a tie, which goes to the
/// smaller `k`.
pub const ELBOW_TIE_TOLERANCE: f64 = 1e-12;

/// The `k` whose bend in the normalised loss curve is closest to a right
/// angle. See [`elbow_of_losses`].
pub fn elbow_index(curve: &CostCurve) -> Result<usize, PartitionError> {
    elbow_of_losses(curve.losses())
}

/// Elbow of `losses[k - 1]` over `k = 1..n`.
///
/// Both axes are scaled to `[0, 1]`, giving points `v_1..v_n`. For each interior
/// `k` the angle between `v_1 - v_k` and `v_k - v_n` is measured, and the `k`
/// whose angle is nearest 90 degrees wins.
pub fn elbow_of_losses(losses: &[f64]) -> Result<usize, PartitionError> {
    let n = losses.len();
    if n < 3 {
        return Err(PartitionError::CurveTooShort(n));
    }
    let lo = losses.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let point = |k: usize| -> (f64, f64) {
        let x = (k - 1) as f64 / (n - 1) as f64;
        let y = if span > 0.0 { (losses[k - 1] - lo) / span } else { 0.0 };
        (x, y)
    };
    let (first, last) = (point(1), point(n));
    let mut best_k = 2;
    let mut best_gap = f64::INFINITY;
    for k in 2..n {
        let v = point(k);
        let a = (first.0 - v.0, first.1 - v.1);
        let b = (v.0 - last.0, v.1 - last.1);
        let cross = a.0 * b.1 - a.1 * b.0;
        let dot = a.0 * b.0 + a.1 * b.1;
        let gap = (cross.abs().atan2(dot) - FRAC_PI_2).abs();
        if gap < best_gap - ELBOW_TIE_TOLERANCE {
            best_gap = gap;
            best_k = k;
        }
    }
    Ok(best_k)
}

/// Lower median.
pub fn median_of(values: &[usize]) -> Option<usize> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    Some(v[(v.len() - 1) / 2])
}

/// Elbows per power and their median.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianOfElbows {
    /// `(z, elbow k)` in the order the powers were given.
    pub elbows: Vec<(u32, usize)>,
    pub k: usize,
}

/// Median of the elbows of the `(k, z)` loss curves for each `z` in `powers`.
/// The per-power curves are independent and run under `exec`.
pub fn median_of_elbows(tree: &LcaTree, powers: &[u32], exec: Exec) -> Result<MedianOfElbows, Error> {
    if powers.is_empty() {
        return Err(PartitionError::NoPowers.into());
    }
    let results: Vec<Result<usize, Error>> = exec.map(powers.len(), |i| {
        let objective = Objective::power(powers[i]).map_err(PartitionError::from)?;
        let curve = cost_curve(&kz_annotate(tree, objective).map_err(PartitionError::from)?);
        Ok(elbow_index(&curve)?)
    });
    let mut elbows = Vec::with_capacity(powers.len());
    for (&z, r) in powers.iter().zip(results) {
        elbows.push((z, r?));
    }
    let ks: Vec<usize> = elbows.iter().map(|&(_, k)| k).collect();
    let k = median_of(&ks).expect("non-empty");
    Ok(MedianOfElbows { elbows, k })
}

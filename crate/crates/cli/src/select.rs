//! Objective and partition-method parameters shared by the CLI and the service.

use ship_core::hierarchy::{extract_partition, ClusterHierarchy, Objective};
use ship_core::partition::{best_partition, elbow_index, median_of, threshold_partition, Stability};
use ship_core::{Error, Partition};

/// Powers used by median-of-elbows when none are given.
pub const DEFAULT_MOE_POWERS: [u32; 5] = [1, 2, 3, 4, 5];

/// Resolves an `objective` name plus an optional `z`.
///
/// `objective=z` takes its power from `z`; a bare `z` implies `objective=z`;
/// with neither, `default` applies.
pub fn resolve_objective(objective: Option<&str>, z: Option<u32>, default: Objective) -> Result<Objective, String> {
    match (objective.map(str::trim), z) {
        (None, None) => Ok(default),
        (None | Some("z"), Some(z)) => Objective::power(z).map_err(|e| e.to_string()),
        (Some("z"), None) => Err("objective z needs a value for z".into()),
        (Some(name), z) => {
            let parsed: Objective = name.parse()?;
            match (parsed, z) {
                (_, None) => Ok(parsed),
                (Objective::Power(p), Some(z)) if p == z => Ok(parsed),
                (_, Some(z)) => Err(format!("objective {name} conflicts with z = {z}")),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    K(usize),
    Elbow,
    Moe(Vec<u32>),
    Threshold(f64),
    Stability(usize),
}

impl Method {
    /// Builds a method from its name and the parameters it needs. Parameters
    /// that the method does not use are rejected.
    pub fn from_params(
        name: &str,
        k: Option<usize>,
        eps: Option<f64>,
        min_cluster_size: Option<usize>,
        powers: Option<Vec<u32>>,
    ) -> Result<Self, String> {
        let unused = |used: &[&str]| -> Result<(), String> {
            let given = [
                ("k", k.is_some()),
                ("eps", eps.is_some()),
                ("min_cluster_size", min_cluster_size.is_some()),
                ("z", powers.is_some()),
            ];
            match given.iter().find(|(p, set)| *set && !used.contains(p)) {
                Some((p, _)) => Err(format!("method {name} does not take {p}")),
                None => Ok(()),
            }
        };
        let method = match name.trim() {
            "k" => {
                unused(&["k"])?;
                Method::K(k.ok_or("method k needs k")?)
            }
            "elbow" => {
                unused(&[])?;
                Method::Elbow
            }
            "moe" => {
                unused(&["z"])?;
                let powers = powers.unwrap_or_else(|| DEFAULT_MOE_POWERS.to_vec());
                for &z in &powers {
                    Objective::power(z).map_err(|e| e.to_string())?;
                }
                if powers.is_empty() {
                    return Err("method moe needs at least one z".into());
                }
                Method::Moe(powers)
            }
            "threshold" => {
                unused(&["eps"])?;
                let eps = eps.ok_or("method threshold needs eps")?;
                if eps.is_nan() || eps < 0.0 {
                    return Err(format!("eps must be non-negative, got {eps}"));
                }
                Method::Threshold(eps)
            }
            "stability" => {
                unused(&["min_cluster_size"])?;
                Method::Stability(min_cluster_size.unwrap_or(1))
            }
            other => return Err(format!("unknown method {other:?} (expected k, elbow, moe, threshold or stability)")),
        };
        Ok(method)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::K(_) => "k",
            Method::Elbow => "elbow",
            Method::Moe(_) => "moe",
            Method::Threshold(_) => "threshold",
            Method::Stability(_) => "stability",
        }
    }

    /// Thresholding and stability read node costs, which are most meaningful
    /// on the k-center hierarchy; the others default to k-median.
    pub fn default_objective(&self) -> Objective {
        match self {
            Method::Threshold(_) | Method::Stability(_) => Objective::Center,
            _ => Objective::MEDIAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub partition: Partition,
    /// The `k` picked by elbow or median-of-elbows.
    pub chosen_k: Option<usize>,
    /// `(z, elbow k)` for median-of-elbows.
    pub elbows: Option<Vec<(u32, usize)>>,
}

/// Applies `method` to `hier`. Median-of-elbows gets its per-power elbows from
/// `elbows`, since they need the underlying tree.
pub fn select(
    hier: &ClusterHierarchy,
    method: &Method,
    elbows: impl FnOnce(&[u32]) -> Result<Vec<(u32, usize)>, Error>,
) -> Result<Selection, Error> {
    let plain = |partition| Selection {
        partition,
        chosen_k: None,
        elbows: None,
    };
    Ok(match method {
        Method::K(k) => plain(extract_partition(hier, *k)?),
        Method::Elbow => {
            let k = elbow_index(hier.curve())?;
            Selection {
                partition: extract_partition(hier, k)?,
                chosen_k: Some(k),
                elbows: None,
            }
        }
        Method::Moe(powers) => {
            let found = elbows(powers)?;
            let ks: Vec<usize> = found.iter().map(|&(_, k)| k).collect();
            let k = median_of(&ks).expect("powers are non-empty");
            Selection {
                partition: extract_partition(hier, k)?,
                chosen_k: Some(k),
                elbows: Some(found),
            }
        }
        Method::Threshold(eps) => plain(threshold_partition(hier, *eps)?),
        Method::Stability(min_size) => plain(best_partition(hier, &Stability::default(), *min_size)?.partition),
    })
}

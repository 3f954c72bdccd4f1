use super::annotate::Annotations;
use super::objective::Objective;

/// Optimal loss for every `k` from 1 to `n` under one objective.
#[derive(Debug, Clone, PartialEq)]
pub struct CostCurve {
    objective: Objective,
    losses: Vec<f64>,
}

impl CostCurve {
    pub fn new(objective: Objective, losses: Vec<f64>) -> Self {
        CostCurve { objective, losses }
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// `losses()[k - 1]` is the optimal cost with `k` centers.
    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    /// Loss at `k` (1-based).
    pub fn loss(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.losses.get(i).copied())
    }

    /// `L_{k+1} - L_k` for `k = 1..n-1`; never positive.
    pub fn deltas(&self) -> Vec<f64> {
        self.losses.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }
}

/// Loss curve implied by annotations in placement order.
///
/// For `(k, z)` objectives the loss with all `n` centers is the sum of the
/// self-costs, and each earlier loss adds back the next center's decrease.
/// Summing from the far end keeps integer-valued trees exact. For `k`-center
/// the loss is the largest trigger not yet placed, or the largest self-cost
/// among placed centers if that is bigger.
pub fn cost_curve(annotations: &Annotations) -> CostCurve {
    let items = annotations.items();
    let n = items.len();
    let objective = annotations.objective();
    let mut losses = vec![0.0; n];
    match objective {
        Objective::Power(_) => {
            let mut acc: f64 = items.iter().map(|a| a.self_cost).sum();
            for k in (1..=n).rev() {
                losses[k - 1] = acc;
                if k >= 2 {
                    acc += items[k - 1].cost_decrease.finite().unwrap_or(0.0);
                }
            }
        }
        Objective::Center => {
            let mut self_max = 0.0f64;
            for k in 1..=n {
                self_max = self_max.max(items[k - 1].self_cost);
                let next = items.get(k).and_then(|a| a.cost_decrease.finite()).unwrap_or(0.0);
                losses[k - 1] = next.max(self_max);
            }
        }
    }
    CostCurve::new(objective, losses)
}

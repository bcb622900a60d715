use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default fraction of the budget given to randomized response.
pub const DEFAULT_ALPHA: f64 = 0.9;

/// How [`allocate_budget`] handles the degree-noise floor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetMode {
    /// `eps2 = alpha * eps` always; the effective total may exceed `eps` when
    /// the floor on `eps1` binds.
    #[default]
    Nominal,
    /// `eps2 = eps - eps1`, so the effective total never exceeds `eps`.
    Strict,
}

/// Split of an edge-LDP budget between the Laplace degree estimate
/// (`epsilon_1`) and randomized response (`epsilon_2`).
///
/// An infinite `epsilon_1` means the degree is used without noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSplit {
    pub epsilon_total: f64,
    pub epsilon_1: f64,
    pub epsilon_2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl BudgetSplit {
    /// A split with explicit shares; nominal total is their sum.
    pub fn new(epsilon_1: f64, epsilon_2: f64) -> Result<Self> {
        if !(epsilon_1 > 0.0) || !(epsilon_2 > 0.0) {
            return Err(Error::arg(format!(
                "budget shares must be positive, got eps1={epsilon_1}, eps2={epsilon_2}"
            )));
        }
        Ok(Self {
            epsilon_total: epsilon_1 + epsilon_2,
            epsilon_1,
            epsilon_2,
            alpha: None,
        })
    }

    /// Total edge-LDP cost under sequential composition.
    pub fn effective_epsilon(&self) -> f64 {
        self.epsilon_1 + self.epsilon_2
    }

    /// True when the effective total exceeds the requested one.
    pub fn overspent(&self) -> bool {
        self.effective_epsilon() > self.epsilon_total * (1.0 + 1e-12)
    }
}

/// Smallest `eps1` that keeps the Laplace term of the noisy-degree variance
/// below the randomized-response term: `sqrt(8 / (n_max - 1))`.
pub fn degree_noise_floor(n_max: usize) -> f64 {
    (8.0 / (n_max as f64 - 1.0)).sqrt()
}

/// Splits `epsilon` into `eps1 = max(sqrt(8/(n_max-1)), (1-alpha) eps)` and
/// `eps2 = alpha * eps` (or `eps - eps1` in [`BudgetMode::Strict`]).
pub fn allocate_budget(epsilon: f64, n_max: usize, alpha: f64, mode: BudgetMode) -> Result<BudgetSplit> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::arg(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    if n_max < 2 {
        return Err(Error::arg(format!("n_max must be at least 2, got {n_max}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::arg(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let floor = degree_noise_floor(n_max);
    let epsilon_1 = floor.max((1.0 - alpha) * epsilon);
    let epsilon_2 = match mode {
        BudgetMode::Nominal => alpha * epsilon,
        BudgetMode::Strict => {
            if epsilon <= floor {
                return Err(Error::InfeasibleBudget { epsilon, floor });
            }
            epsilon - epsilon_1
        }
    };
    Ok(BudgetSplit {
        epsilon_total: epsilon,
        epsilon_1,
        epsilon_2,
        alpha: Some(alpha),
    })
}

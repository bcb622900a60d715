use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::{BudgetMode, DEFAULT_ALPHA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    Dprr,
    Rr,
    #[serde(rename = "locallap")]
    LocalLap,
    NonprivPart,
    NonprivFull,
}

impl Mechanism {
    pub const ALL: [Mechanism; 5] = [
        Mechanism::Dprr,
        Mechanism::Rr,
        Mechanism::LocalLap,
        Mechanism::NonprivPart,
        Mechanism::NonprivFull,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Dprr => "dprr",
            Mechanism::Rr => "rr",
            Mechanism::LocalLap => "locallap",
            Mechanism::NonprivPart => "nonpriv-part",
            Mechanism::NonprivFull => "nonpriv-full",
        }
    }

    /// Whether private users' rows are randomized (as opposed to published
    /// or withheld).
    pub fn is_private(self) -> bool {
        matches!(self, Mechanism::Dprr | Mechanism::Rr | Mechanism::LocalLap)
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mechanism::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::arg(format!("unknown mechanism {s:?}")))
    }
}

/// How directed noisy rows are turned into an undirected relation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetrize {
    #[default]
    None,
    Union,
    Intersection,
}

impl fmt::Display for Symmetrize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetrize::None => "none",
            Symmetrize::Union => "union",
            Symmetrize::Intersection => "intersection",
        })
    }
}

impl FromStr for Symmetrize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Symmetrize::None),
            "union" => Ok(Symmetrize::Union),
            "intersection" => Ok(Symmetrize::Intersection),
            _ => Err(Error::arg(format!("unknown symmetrize mode {s:?}"))),
        }
    }
}

/// Everything that determines how users of a graph report their rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyConfig {
    pub mechanism: Mechanism,
    /// Budget of every private user.
    pub epsilon: f64,
    /// Share of the DPRR budget spent on randomized response.
    pub alpha: f64,
    /// Fraction of users who publish their rows unperturbed.
    pub rho: f64,
    pub role_seed: u64,
    /// Largest node count across the collection, for budget allocation.
    pub n_max: usize,
    pub symmetrize: Symmetrize,
    #[serde(default)]
    pub budget_mode: BudgetMode,
}

impl PrivacyConfig {
    /// Common setting: every user private.
    pub fn common(mechanism: Mechanism, epsilon: f64, n_max: usize) -> Self {
        Self {
            mechanism,
            epsilon,
            alpha: DEFAULT_ALPHA,
            rho: 0.0,
            role_seed: 0,
            n_max,
            symmetrize: Symmetrize::None,
            budget_mode: BudgetMode::Nominal,
        }
    }

    pub fn with_rho(mut self, rho: f64, role_seed: u64) -> Self {
        self.rho = rho;
        self.role_seed = role_seed;
        self
    }

    pub fn with_symmetrize(mut self, mode: Symmetrize) -> Self {
        self.symmetrize = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::arg(format!("rho must lie in [0, 1], got {}", self.rho)));
        }
        let any_private = self.rho < 1.0;
        match self.mechanism {
            Mechanism::Dprr if any_private => {
                if !(self.epsilon > 0.0) {
                    return Err(Error::arg("DPRR needs epsilon > 0"));
                }
                if !(self.alpha > 0.0 && self.alpha < 1.0) {
                    return Err(Error::arg(format!("alpha must lie in (0, 1), got {}", self.alpha)));
                }
                if self.n_max < 2 {
                    return Err(Error::arg("DPRR needs n_max >= 2"));
                }
            }
            Mechanism::LocalLap if any_private && !(self.epsilon > 0.0) => {
                return Err(Error::arg("LocalLap needs epsilon > 0"));
            }
            Mechanism::Rr if any_private && !(self.epsilon >= 0.0) => {
                return Err(Error::arg("RR needs epsilon >= 0"));
            }
            _ => {}
        }
        Ok(())
    }
}

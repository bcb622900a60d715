//! Per-user degree preservation over repeated protocol runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::protocol::{private_split, run_protocol_exec, Mechanism, NoisyGraph, PrivacyConfig};
use crate::par::Exec;
use crate::rng::RngStream;

/// Statistics of one user's noisy degree across trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserDegreeStats {
    pub graph: usize,
    pub user: usize,
    pub d: usize,
    pub mean_d_tilde: f64,
    /// Sample variance (n - 1 denominator); 0 for a single trial.
    pub var_d_tilde: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_d_star: Option<f64>,
}

impl UserDegreeStats {
    pub fn bias(&self) -> f64 {
        self.mean_d_tilde - self.d as f64
    }
}

/// Degree preservation of one configuration over a set of users.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub config: PrivacyConfig,
    pub trials: usize,
    pub users: Vec<UserDegreeStats>,
    /// Mean over users and trials of `|d~ - d|`.
    pub mean_abs_error: f64,
}

/// A user that failed a gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateViolation {
    pub graph: usize,
    pub user: usize,
    pub d: usize,
    pub observed: f64,
    pub limit: f64,
}

impl DegreeReport {
    /// Mean over users of `mean(d~) - d`.
    pub fn mean_bias(&self) -> f64 {
        if self.users.is_empty() {
            return 0.0;
        }
        self.users.iter().map(UserDegreeStats::bias).sum::<f64>() / self.users.len() as f64
    }

    /// Reference variance `(n_max - 1)/4 + 2/eps1^2` for DPRR; `None` for
    /// mechanisms without a degree-noise share.
    pub fn variance_bound(&self) -> Option<f64> {
        variance_bound(&self.config)
    }

    /// Users with `d <= max_degree` whose mean noisy degree is further than
    /// `max(1, rel_tol * d)` from `d`.
    pub fn bias_violations(&self, max_degree: usize, rel_tol: f64) -> Vec<GateViolation> {
        self.users
            .iter()
            .filter(|u| u.d <= max_degree)
            .filter_map(|u| {
                let limit = (rel_tol * u.d as f64).max(1.0);
                (u.bias().abs() > limit).then_some(GateViolation {
                    graph: u.graph,
                    user: u.user,
                    d: u.d,
                    observed: u.mean_d_tilde,
                    limit,
                })
            })
            .collect()
    }

    /// Users whose sample variance exceeds `factor * variance_bound()`.
    /// Empty when no bound applies.
    pub fn variance_violations(&self, factor: f64) -> Vec<GateViolation> {
        let Some(bound) = self.variance_bound() else {
            return Vec::new();
        };
        let limit = factor * bound;
        self.users
            .iter()
            .filter(|u| u.var_d_tilde > limit)
            .map(|u| GateViolation {
                graph: u.graph,
                user: u.user,
                d: u.d,
                observed: u.var_d_tilde,
                limit,
            })
            .collect()
    }

    /// Merges reports of several graphs run under the same configuration.
    pub fn merge(reports: Vec<DegreeReport>) -> Option<DegreeReport> {
        let mut it = reports.into_iter();
        let mut first = it.next()?;
        let mut weight = first.users.len() as f64;
        let mut err = first.mean_abs_error * weight;
        for r in it {
            let w = r.users.len() as f64;
            err += r.mean_abs_error * w;
            weight += w;
            first.users.extend(r.users);
        }
        first.mean_abs_error = if weight > 0.0 { err / weight } else { 0.0 };
        Some(first)
    }
}

/// `(n_max - 1)/4 + 2/eps1^2` for DPRR configurations.
pub fn variance_bound(cfg: &PrivacyConfig) -> Option<f64> {
    if cfg.mechanism != Mechanism::Dprr {
        return None;
    }
    let split = private_split(cfg).ok()??;
    Some((cfg.n_max as f64 - 1.0) / 4.0 + 2.0 / (split.epsilon_1 * split.epsilon_1))
}

struct TrialDegrees {
    d_tilde: Vec<usize>,
    q: Vec<Option<f64>>,
    d_star: Vec<Option<f64>>,
}

fn per_user(noisy: &NoisyGraph, n: usize) -> TrialDegrees {
    let mut out = TrialDegrees {
        d_tilde: vec![0; n],
        q: vec![None; n],
        d_star: vec![None; n],
    };
    let map = noisy.provenance().node_map.clone();
    for k in 0..noisy.node_count() {
        let i = map.as_ref().map_or(k, |m| m[k]);
        out.d_tilde[i] = noisy.noisy_degree(k);
        if let Some(u) = noisy.users().get(k) {
            out.q[i] = u.q;
            out.d_star[i] = u.d_star;
        }
    }
    out
}

fn mean_of(xs: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for x in xs {
        sum += x?;
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

/// Runs the protocol `trials` times on `g` (trial `t` uses
/// `stream.trial(t)`) and aggregates per-user noisy degrees. Rows are read
/// as directed; users removed by NonPriv-Part count as degree 0.
pub fn degree_report(
    g: &Graph,
    cfg: &PrivacyConfig,
    trials: usize,
    stream: RngStream,
    exec: Exec,
) -> Result<DegreeReport> {
    if trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    let n = g.node_count();
    let runs: Vec<Result<TrialDegrees>> = exec.map_range(trials, |t| {
        let noisy = run_protocol_exec(g, cfg, stream.trial(t), Exec::Sequential)?;
        Ok(per_user(&noisy, n))
    });
    let runs: Vec<TrialDegrees> = runs.into_iter().collect::<Result<_>>()?;

    let mut abs_err = 0.0;
    let users = (0..n)
        .map(|i| {
            let d = g.degree(i);
            let xs: Vec<f64> = runs.iter().map(|r| r.d_tilde[i] as f64).collect();
            let mean = xs.iter().sum::<f64>() / trials as f64;
            let var = if trials > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
            } else {
                0.0
            };
            abs_err += xs.iter().map(|x| (x - d as f64).abs()).sum::<f64>();
            UserDegreeStats {
                graph: stream.graph as usize,
                user: i,
                d,
                mean_d_tilde: mean,
                var_d_tilde: var,
                mean_q: mean_of(runs.iter().map(|r| r.q[i])),
                mean_d_star: mean_of(runs.iter().map(|r| r.d_star[i])),
            }
        })
        .collect();
    Ok(DegreeReport {
        config: *cfg,
        trials,
        users,
        mean_abs_error: if n == 0 { 0.0 } else { abs_err / (n * trials) as f64 },
    })
}

//! Degree-preserving randomized response.
//!
//! A user perturbs their degree with Laplace noise, uses the noisy degree to
//! pick a sampling probability `q` that makes the expected number of 1s after
//! randomized response match the degree, then applies randomized response
//! followed by edge sampling. Per off-diagonal bit the output law is
//!
//! ```text
//! Pr[out = 1] = p * q        if the bit is 1
//!             = (1 - p) * q  if the bit is 0
//! ```
//!
//! [`dprr`] samples that law directly, touching only the 1s it produces;
//! [`dprr_composed`] runs the two stages literally and is kept as a reference.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::budget::BudgetSplit;
use super::laplace::noisy_degree;
use super::rr::{edge_sampling, perturb_row, rr_keep_prob, warner_rr};
use crate::error::{Error, Result};
use crate::graph::NeighborList;

/// Output of one user's DPRR run, with the internals needed for auditing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DprrRowResult {
    pub noisy: NeighborList,
    /// Laplace-noised degree.
    pub d_star: f64,
    /// Sampling probability after projection onto [0, 1].
    pub q: f64,
    /// Randomized-response keep probability.
    pub p: f64,
}

impl DprrRowResult {
    pub fn noisy_degree(&self) -> usize {
        self.noisy.degree()
    }
}

/// Unprojected sampling probability `d* / (d* (2p - 1) + (n - 1)(1 - p))`.
pub fn raw_sampling_prob(d_star: f64, p: f64, n: usize) -> f64 {
    d_star / (d_star * (2.0 * p - 1.0) + (n as f64 - 1.0) * (1.0 - p))
}

/// Sampling probability for a row of length `n`, projected onto [0, 1].
///
/// A non-positive denominator only arises for very negative `d*`; the
/// numerator is then negative too and the result is 0.
pub fn sampling_prob(d_star: f64, p: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::arg(format!("row length must be at least 2, got {n}")));
    }
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::arg(format!("keep probability must lie in [0.5, 1], got {p}")));
    }
    let denom = d_star * (2.0 * p - 1.0) + (n as f64 - 1.0) * (1.0 - p);
    if !(denom > 0.0) {
        return Ok(0.0);
    }
    let q = d_star / denom;
    Ok(q.clamp(0.0, 1.0))
}

fn prepare<R: Rng + ?Sized>(row: &NeighborList, split: &BudgetSplit, rng: &mut R) -> Result<(f64, f64, f64)> {
    if row.len() < 2 {
        return Err(Error::arg(format!("row length must be at least 2, got {}", row.len())));
    }
    let d_star = noisy_degree(row.degree(), split.epsilon_1, rng)?;
    let p = rr_keep_prob(split.epsilon_2)?;
    let q = sampling_prob(d_star, p, row.len())?;
    Ok((d_star, p, q))
}

/// Runs DPRR on one neighbor list.
pub fn dprr<R: Rng + ?Sized>(row: &NeighborList, split: &BudgetSplit, rng: &mut R) -> Result<DprrRowResult> {
    let (d_star, p, q) = prepare(row, split, rng)?;
    let noisy = perturb_row(row, p * q, (1.0 - p) * q, rng);
    Ok(DprrRowResult { noisy, d_star, q, p })
}

/// DPRR as two literal passes: randomized response, then edge sampling.
/// Same output law as [`dprr`], but costs O(n) per row.
pub fn dprr_composed<R: Rng + ?Sized>(
    row: &NeighborList,
    split: &BudgetSplit,
    rng: &mut R,
) -> Result<DprrRowResult> {
    let (d_star, p, q) = prepare(row, split, rng)?;
    let randomized = warner_rr(row, p, rng)?;
    let noisy = edge_sampling(&randomized, q, rng)?;
    Ok(DprrRowResult { noisy, d_star, q, p })
}

/// `E[d~ | d*]` for a row of degree `d` given the realized (projected) `q`.
pub fn conditional_expected_degree(d: usize, n: usize, p: f64, q: f64) -> f64 {
    (d as f64 * (2.0 * p - 1.0) + (n as f64 - 1.0) * (1.0 - p)) * q
}

//! Local randomizers and budget allocation.

mod budget;
mod dprr;
mod laplace;
mod local_lap;
mod ratio;
mod rr;

pub use budget::{allocate_budget, degree_noise_floor, BudgetMode, BudgetSplit, DEFAULT_ALPHA};
pub use dprr::{
    conditional_expected_degree, dprr, dprr_composed, raw_sampling_prob, sampling_prob,
    DprrRowResult,
};
pub use laplace::{laplace_sample, noisy_degree};
pub use local_lap::{edge_budget, local_lap_split, select_top_pairs, LocalLapReport};
pub use ratio::{per_bit_likelihood_ratio, relationship_dp_level, BitMechanism};
pub use rr::{edge_sampling, rr_keep_prob, warner_rr};

use crate::error::Result;
use crate::graph::Graph;
use crate::protocol::{run_protocol, Mechanism, NoisyGraph, PrivacyConfig};
use crate::rng::RngStream;

/// Warner's RR on every row of `g`, every user private at `epsilon`.
pub fn rr_baseline(g: &Graph, epsilon: f64, stream: RngStream) -> Result<NoisyGraph> {
    run_protocol(g, &PrivacyConfig::common(Mechanism::Rr, epsilon, g.node_count()), stream)
}

/// LocalLap on `g`, every user private at `epsilon`.
pub fn local_lap(g: &Graph, epsilon: f64, stream: RngStream) -> Result<NoisyGraph> {
    run_protocol(
        g,
        &PrivacyConfig::common(Mechanism::LocalLap, epsilon, g.node_count()),
        stream,
    )
}

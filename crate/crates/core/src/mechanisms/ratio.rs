//! Closed-form per-bit likelihood ratios of the local randomizers.

use serde::{Deserialize, Serialize};

/// Per-bit output law of a randomizer, for privacy-ratio evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mechanism", rename_all = "snake_case")]
pub enum BitMechanism {
    /// Warner's RR with keep probability `p`.
    Rr { p: f64 },
    /// RR followed by edge sampling with a fixed (already realized) `q`.
    DprrGivenQ { p: f64, q: f64 },
}

impl BitMechanism {
    /// `Pr[out = 1 | bit]`.
    pub fn prob_one(&self, bit: bool) -> f64 {
        match *self {
            BitMechanism::Rr { p } => {
                if bit {
                    p
                } else {
                    1.0 - p
                }
            }
            BitMechanism::DprrGivenQ { p, q } => {
                if bit {
                    p * q
                } else {
                    (1.0 - p) * q
                }
            }
        }
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    match (a == 0.0, b == 0.0) {
        (true, true) => 1.0,
        (false, true) | (true, false) => f64::INFINITY,
        (false, false) => (a / b).max(b / a),
    }
}

/// Largest ratio `Pr[s | bit = x] / Pr[s | bit = x']` over outputs `s` and
/// bit values. An infinite result means the mechanism gives no edge-LDP
/// guarantee.
pub fn per_bit_likelihood_ratio(mechanism: BitMechanism) -> f64 {
    let one_given_1 = mechanism.prob_one(true);
    let one_given_0 = mechanism.prob_one(false);
    ratio(one_given_1, one_given_0).max(ratio(1.0 - one_given_1, 1.0 - one_given_0))
}

/// Relationship-DP level implied by `epsilon`-edge LDP when both endpoints
/// of an undirected edge report it: `2 * epsilon`.
pub fn relationship_dp_level(edge_ldp_epsilon: f64) -> f64 {
    2.0 * edge_ldp_epsilon
}

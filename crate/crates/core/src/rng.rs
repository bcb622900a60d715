//! Seeded random streams.
//!
//! Every randomized operation draws from a [`RngStream`] keyed by
//! `(seed, graph, user)`. Two streams with the same key yield the same
//! sequence regardless of the order in which they are consumed, which is
//! what lets rows of a graph be obfuscated concurrently and still reproduce
//! bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Generator type handed to every randomizer.
pub type StreamRng = ChaCha8Rng;

/// User id reserved for per-graph draws that do not belong to a single user
/// (role assignment).
pub const GRAPH_LANE: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub graph: u64,
    pub user: u64,
}

impl RngStream {
    pub fn new(seed: u64, graph: u64, user: u64) -> Self {
        Self { seed, graph, user }
    }

    /// Stream for one user of one graph under the same base seed.
    pub fn user(&self, user: usize) -> Self {
        Self {
            user: user as u64,
            ..*self
        }
    }

    /// Stream for another graph of a collection.
    pub fn graph(&self, graph: usize) -> Self {
        Self {
            graph: graph as u64,
            ..*self
        }
    }

    /// Independent base seed for repetition `trial` of an experiment.
    pub fn trial(&self, trial: usize) -> Self {
        Self {
            seed: mix(self.seed ^ mix(0x7472_6961_6c00_0000 ^ trial as u64)),
            ..*self
        }
    }

    pub fn rng(&self) -> StreamRng {
        let mut state = self.seed;
        let mut key = [0u8; 32];
        let words = [
            splitmix(&mut state),
            splitmix(&mut state) ^ mix(self.graph),
            splitmix(&mut state) ^ mix(self.user.wrapping_add(0x5bd1_e995)),
            splitmix(&mut state),
        ];
        for (chunk, w) in key.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    mix(*state)
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

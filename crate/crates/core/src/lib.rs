//! Degree-preserving randomized response (DPRR) for edge local differential
//! privacy on graphs.
//!
//! Each user holds one row of an adjacency matrix and perturbs it locally
//! before sending it to a server. DPRR keeps the expected number of 1s in
//! the perturbed row close to the user's true degree, so the noisy graph
//! stays as sparse as the original. The crate also provides the baselines
//! (Warner's RR, LocalLap, NonPriv-Part/Full), budget allocation, dataset
//! ingestion, and an analysis suite for degree preservation and scaling.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod graph;
pub mod mechanisms;
pub mod par;
pub mod pipeline;
pub mod protocol;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Graph, GraphCollection, NeighborList};
pub use par::Exec;
pub use protocol::{Mechanism, NoisyGraph, PrivacyConfig, Symmetrize};
pub use rng::RngStream;

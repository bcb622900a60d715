//! LocalLap: a local-model variant of Laplace graph publication.
//!
//! Every user reports a noisy degree `d + Lap(1/eps1)` and noisy scores
//! `a_ij + Lap(1/eps2)` for her upper-triangular entries `j > i`. The server
//! sets `T = round(sum(d*) / 2)` and keeps the `T` highest-scoring pairs.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::budget::BudgetSplit;
use super::laplace::unit_noise;
use crate::error::{Error, Result};
use crate::graph::NeighborList;
use crate::rng::StreamRng;

/// Fixed split used by LocalLap: one tenth for degrees, the rest for scores.
pub fn local_lap_split(epsilon: f64) -> Result<BudgetSplit> {
    let mut s = BudgetSplit::new(epsilon / 10.0, 9.0 * epsilon / 10.0)?;
    s.epsilon_total = epsilon;
    Ok(s)
}

/// Number of edges to publish: `sum(d*) / 2` rounded half away from zero,
/// floored at 0.
pub fn edge_budget(d_stars: &[f64]) -> usize {
    let half = d_stars.iter().sum::<f64>() / 2.0;
    if half.is_nan() || half <= 0.0 {
        0
    } else {
        half.round() as usize
    }
}

/// One user's LocalLap message. The score vector is O(n) long, so it is
/// kept as the user's generator state and replayed on demand; the values
/// are fixed once the report is created.
#[derive(Debug, Clone)]
pub struct LocalLapReport {
    pub d_star: f64,
    row: NeighborList,
    epsilon_2: f64,
    score_rng: StreamRng,
}

impl LocalLapReport {
    pub fn create(row: &NeighborList, split: &BudgetSplit, mut rng: StreamRng) -> Result<Self> {
        if !(split.epsilon_1 > 0.0 && split.epsilon_2 > 0.0) {
            return Err(Error::arg("LocalLap needs positive budget shares"));
        }
        let d_star = row.degree() as f64 + unit_noise(split.epsilon_1, &mut rng);
        Ok(Self {
            d_star,
            row: row.clone(),
            epsilon_2: split.epsilon_2,
            score_rng: rng,
        })
    }

    pub fn owner(&self) -> usize {
        self.row.owner()
    }

    /// Noisy scores `(j, a_ij + Lap(1/eps2))` for `j > owner`.
    pub fn scores(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let mut rng = self.score_rng.clone();
        let owner = self.row.owner();
        let bits = self.row.bits();
        let start = bits.partition_point(|&j| j <= owner);
        let mut next_one = start;
        let eps = self.epsilon_2;
        ((owner + 1)..self.row.len()).map(move |j| {
            let bit = if next_one < bits.len() && bits[next_one] == j {
                next_one += 1;
                1.0
            } else {
                0.0
            };
            (j, bit + unit_noise(eps, &mut rng))
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    score: f64,
    pair: (usize, usize),
}

// Greater means preferred: higher score, then lexicographically smaller pair.
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.pair.cmp(&self.pair))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

/// Keeps the `t` best-scoring pairs from a stream of `(i, j, score)`,
/// breaking ties by lexicographic `(i, j)`. Memory is O(t).
pub fn select_top_pairs<I>(scored: I, t: usize) -> Vec<(usize, usize)>
where
    I: IntoIterator<Item = (usize, usize, f64)>,
{
    if t == 0 {
        return Vec::new();
    }
    let mut heap: BinaryHeap<Reverse<Candidate>> = BinaryHeap::with_capacity(t + 1);
    for (i, j, score) in scored {
        let c = Candidate { score, pair: (i, j) };
        if heap.len() < t {
            heap.push(Reverse(c));
        } else if let Some(Reverse(worst)) = heap.peek() {
            if c > *worst {
                heap.pop();
                heap.push(Reverse(c));
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = heap.into_iter().map(|Reverse(c)| c.pair).collect();
    pairs.sort_unstable();
    pairs
}

//! Warner's randomized response and edge sampling on neighbor lists.
//!
//! Rows are sparse, so flipping the `n - 1 - d` zero bits is done by
//! geometric skipping over the off-diagonal positions: the cost is
//! proportional to the number of 1s produced rather than to `n`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::NeighborList;

/// Probability that randomized response reports a bit unchanged:
/// `e^eps / (e^eps + 1)`. Infinite `eps` gives 1.
pub fn rr_keep_prob(epsilon_2: f64) -> Result<f64> {
    if !(epsilon_2 >= 0.0) {
        return Err(Error::arg(format!("epsilon must be non-negative, got {epsilon_2}")));
    }
    Ok(1.0 / (1.0 + (-epsilon_2).exp()))
}

/// Calls `f` with every position in `0..len` selected by independent
/// Bernoulli(`rate`) trials, in increasing order.
pub(crate) fn for_each_bernoulli<R, F>(len: usize, rate: f64, rng: &mut R, mut f: F)
where
    R: Rng + ?Sized,
    F: FnMut(usize),
{
    if len == 0 || !(rate > 0.0) {
        return;
    }
    if rate >= 1.0 {
        (0..len).for_each(f);
        return;
    }
    let log_miss = (-rate).ln_1p();
    let mut pos: usize = 0;
    loop {
        // u in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let gap = (u.ln() / log_miss).floor();
        if gap >= (len - pos) as f64 {
            return;
        }
        pos += gap as usize;
        f(pos);
        pos += 1;
        if pos >= len {
            return;
        }
    }
}

/// Produces a row where each existing 1 survives with probability
/// `keep_one` and each off-diagonal 0 becomes 1 with probability `flip_zero`.
pub(crate) fn perturb_row<R: Rng + ?Sized>(
    row: &NeighborList,
    keep_one: f64,
    flip_zero: f64,
    rng: &mut R,
) -> NeighborList {
    let owner = row.owner();
    let bits = row.bits();
    let kept: Vec<usize> = bits
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < keep_one)
        .collect();
    let mut flipped = Vec::new();
    let off_diagonal = row.len().saturating_sub(1);
    for_each_bernoulli(off_diagonal, flip_zero, rng, |k| {
        let j = if k >= owner { k + 1 } else { k };
        if bits.binary_search(&j).is_err() {
            flipped.push(j);
        }
    });
    NeighborList::from_sorted(owner, row.len(), merge_sorted(kept, flipped))
}

fn merge_sorted(a: Vec<usize>, b: Vec<usize>) -> Vec<usize> {
    if b.is_empty() {
        return a;
    }
    if a.is_empty() {
        return b;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn check_prob(name: &str, x: f64, lo: f64) -> Result<()> {
    if !(x >= lo && x <= 1.0) {
        return Err(Error::arg(format!("{name} must lie in [{lo}, 1], got {x}")));
    }
    Ok(())
}

/// Warner's RR: every off-diagonal bit is kept with probability `p` and
/// flipped otherwise. The diagonal stays 0.
pub fn warner_rr<R: Rng + ?Sized>(row: &NeighborList, p: f64, rng: &mut R) -> Result<NeighborList> {
    check_prob("keep probability", p, 0.5)?;
    Ok(perturb_row(row, p, 1.0 - p, rng))
}

/// Keeps every 1 independently with probability `q`; 0s stay 0.
pub fn edge_sampling<R: Rng + ?Sized>(row: &NeighborList, q: f64, rng: &mut R) -> Result<NeighborList> {
    check_prob("sampling probability", q, 0.0)?;
    Ok(perturb_row(row, q, 0.0, rng))
}

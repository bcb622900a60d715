use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphCollection;

/// Normalized degree histogram. Bin `k` covers `[edges[k], edges[k + 1])`;
/// the last bin is open-ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub edges: Vec<usize>,
    pub mass: Vec<f64>,
    pub nodes: usize,
}

impl DegreeHistogram {
    pub fn bin_of(&self, degree: usize) -> usize {
        self.edges.partition_point(|&e| e <= degree).saturating_sub(1)
    }

    /// Total-variation distance to another histogram over the same bins.
    pub fn total_variation(&self, other: &DegreeHistogram) -> f64 {
        0.5 * self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

/// Logarithmic bin edges `0, 1, 2, 4, 8, ...` reaching past `max_degree`.
pub fn log_bins(max_degree: usize) -> Vec<usize> {
    let mut edges = vec![0, 1];
    let mut e = 2;
    while e <= max_degree {
        edges.push(e);
        e *= 2;
    }
    edges
}

/// Per-class degree histograms over all nodes of the graphs of each class.
pub fn degree_histogram(
    collection: &GraphCollection,
    bins: &[usize],
) -> Result<BTreeMap<i64, DegreeHistogram>> {
    let labels = collection
        .labels
        .as_ref()
        .ok_or_else(|| Error::arg(format!("collection {} has no labels", collection.name)))?;
    if bins.is_empty() || bins.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("histogram bin edges must be non-empty and strictly increasing"));
    }
    let mut out: BTreeMap<i64, DegreeHistogram> = BTreeMap::new();
    for (g, &label) in collection.graphs.iter().zip(labels) {
        let h = out.entry(label).or_insert_with(|| DegreeHistogram {
            edges: bins.to_vec(),
            mass: vec![0.0; bins.len()],
            nodes: 0,
        });
        for i in 0..g.node_count() {
            let d = g.degree(i);
            if d < bins[0] {
                continue;
            }
            let b = h.bin_of(d);
            h.mass[b] += 1.0;
            h.nodes += 1;
        }
    }
    for h in out.values_mut() {
        if h.nodes > 0 {
            let total = h.nodes as f64;
            h.mass.iter_mut().for_each(|m| *m /= total);
        }
    }
    Ok(out)
}

use crate::graph::Graph;

/// Per-bit output law for analytic edge counts.
#[derive(Debug, Clone, Copy)]
pub enum EdgeModel<'a> {
    /// Warner's RR with keep probability `p` on every row.
    Rr { p: f64 },
    /// DPRR with keep probability `p` and the realized per-user `q`.
    Dprr { p: f64, q: &'a [f64] },
}

impl EdgeModel<'_> {
    fn row_law(&self, i: usize) -> (f64, f64) {
        match *self {
            EdgeModel::Rr { p } => (p, 1.0 - p),
            EdgeModel::Dprr { p, q } => (p * q[i], (1.0 - p) * q[i]),
        }
    }
}

/// Expected total number of 1s across all noisy rows:
/// `sum_i d_i * P(1|1) + (n - 1 - d_i) * P(1|0)`.
pub fn expected_edges(model: EdgeModel<'_>, g: &Graph) -> f64 {
    let n = g.node_count();
    (0..n)
        .map(|i| {
            let (one, zero) = model.row_law(i);
            let d = g.degree(i) as f64;
            d * one + (n as f64 - 1.0 - d) * zero
        })
        .sum()
}

/// Variance of that total, as a sum of independent Bernoulli variances.
pub fn edges_variance(model: EdgeModel<'_>, g: &Graph) -> f64 {
    let n = g.node_count();
    (0..n)
        .map(|i| {
            let (one, zero) = model.row_law(i);
            let d = g.degree(i) as f64;
            d * one * (1.0 - one) + (n as f64 - 1.0 - d) * zero * (1.0 - zero)
        })
        .sum()
}

//! Obfuscation-time and output-size scaling.

use std::time::Instant;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{generate_ba, Graph};
use crate::par::Exec;
use crate::protocol::{run_protocol_exec, Mechanism, PrivacyConfig};
use crate::rng::RngStream;

/// What is scaled along the size axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ScalingAxis {
    /// Fresh BA graphs with `m` attachments per node at each size.
    Ba { m: usize, sizes: Vec<usize> },
    /// Uniform node samples of a fixed graph, `gamma * n` nodes each.
    Subsample { gammas: Vec<f64> },
}

/// One (mechanism, size) measurement; times and output sizes are medians
/// over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    pub mechanism: Mechanism,
    /// `n` for the BA axis, `gamma` for the subsample axis.
    pub param: f64,
    pub n: usize,
    pub edges: usize,
    pub output_ones: usize,
    pub seconds: f64,
    /// Heap bytes held by the noisy rows; a best-effort stand-in for peak
    /// resident memory.
    pub resident_bytes: usize,
}

/// Induced subgraph on `round(gamma * n)` nodes drawn uniformly without
/// replacement, kept in increasing id order.
pub fn subsample(g: &Graph, gamma: f64, stream: RngStream) -> Result<Graph> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::arg(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let n = g.node_count();
    let k = (gamma * n as f64).round() as usize;
    if k == n {
        return Ok(g.clone());
    }
    let mut nodes = sample(&mut stream.rng(), n, k).into_vec();
    nodes.sort_unstable();
    Ok(g.induced_subgraph(&nodes).0)
}

fn median_f64(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

fn median_usize(xs: &mut [usize]) -> usize {
    xs.sort_unstable();
    xs[(xs.len() - 1) / 2]
}

fn measure(
    g: &Graph,
    param: f64,
    mechanism: Mechanism,
    epsilon: f64,
    trials: usize,
    stream: RngStream,
    exec: Exec,
) -> Result<ScalingRecord> {
    let n = g.node_count();
    let cfg = PrivacyConfig::common(mechanism, epsilon, n);
    let mut secs = Vec::with_capacity(trials);
    let mut ones = Vec::with_capacity(trials);
    let mut bytes = 0;
    for t in 0..trials {
        let start = Instant::now();
        let noisy = run_protocol_exec(g, &cfg, stream.trial(t), exec)?;
        secs.push(start.elapsed().as_secs_f64());
        ones.push(noisy.ones());
        bytes = bytes.max(noisy.heap_bytes());
    }
    Ok(ScalingRecord {
        mechanism,
        param,
        n,
        edges: g.edge_count(),
        output_ones: median_usize(&mut ones),
        seconds: median_f64(&mut secs),
        resident_bytes: bytes,
    })
}

/// Measures every mechanism at every size. For the subsample axis `base`
/// must be given; it is ignored for the BA axis.
#[allow(clippy::too_many_arguments)]
pub fn bench_scaling(
    axis: &ScalingAxis,
    base: Option<&Graph>,
    mechanisms: &[Mechanism],
    epsilon: f64,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<ScalingRecord>> {
    if trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    if mechanisms.is_empty() {
        return Err(Error::arg("at least one mechanism is required"));
    }
    let root = RngStream::new(seed, 0, 0);
    let graphs: Vec<(f64, Graph)> = match axis {
        ScalingAxis::Ba { m, sizes } => {
            check_sorted(sizes.iter().map(|&s| s as f64))?;
            sizes
                .iter()
                .enumerate()
                .map(|(k, &n)| Ok((n as f64, generate_ba(n, *m, root.graph(k))?)))
                .collect::<Result<_>>()?
        }
        ScalingAxis::Subsample { gammas } => {
            let base = base.ok_or_else(|| Error::arg("subsample scaling needs an input graph"))?;
            check_sorted(gammas.iter().copied())?;
            gammas
                .iter()
                .enumerate()
                .map(|(k, &gamma)| Ok((gamma, subsample(base, gamma, root.graph(k))?)))
                .collect::<Result<_>>()?
        }
    };
    let mut out = Vec::with_capacity(graphs.len() * mechanisms.len());
    for &mech in mechanisms {
        for (k, (param, g)) in graphs.iter().enumerate() {
            log::info!("bench {mech} at {param} (n={})", g.node_count());
            out.push(measure(g, *param, mech, epsilon, trials, root.graph(k).user(1), exec)?);
        }
    }
    Ok(out)
}

fn check_sorted(xs: impl Iterator<Item = f64>) -> Result<()> {
    let xs: Vec<f64> = xs.collect();
    if xs.is_empty() {
        return Err(Error::arg("at least one size is required"));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::arg("sizes must be strictly increasing"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_subsample_is_identity() {
        let g = generate_ba(300, 3, RngStream::new(1, 0, 0)).unwrap();
        assert_eq!(subsample(&g, 1.0, RngStream::new(2, 0, 0)).unwrap(), g);
    }

    #[test]
    fn subsample_size_and_edges() {
        let g = generate_ba(300, 3, RngStream::new(1, 0, 0)).unwrap();
        let s = subsample(&g, 0.5, RngStream::new(2, 0, 0)).unwrap();
        assert_eq!(s.node_count(), 150);
        assert!(s.edge_count() < g.edge_count());
        assert!(subsample(&g, 0.0, RngStream::new(2, 0, 0)).is_err());
    }

    #[test]
    fn unsorted_sizes_rejected() {
        let axis = ScalingAxis::Ba { m: 3, sizes: vec![200, 100] };
        assert!(bench_scaling(&axis, None, &[Mechanism::Dprr], 1.0, 1, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn records_per_mechanism_and_size() {
        let axis = ScalingAxis::Ba { m: 3, sizes: vec![100, 200] };
        let mechs = [Mechanism::Dprr, Mechanism::Rr];
        let r = bench_scaling(&axis, None, &mechs, 1.0, 3, 7, Exec::Sequential).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r[0].mechanism, Mechanism::Dprr);
        assert_eq!(r[1].n, 200);
        assert!(r[3].output_ones > r[1].output_ones);
    }

    #[test]
    fn medians() {
        assert_eq!(median_f64(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median_f64(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median_usize(&mut [5, 1, 3, 2]), 2);
    }
}

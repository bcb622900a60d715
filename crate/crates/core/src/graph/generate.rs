use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Barabasi-Albert preferential attachment graph.
///
/// Starts from a complete graph on `m + 1` nodes; every later node attaches
/// to `m` distinct existing nodes drawn with probability proportional to
/// their current degree. The edge count is exactly
/// `m * (n - m - 1) + (m + 1) * m / 2`.
pub fn generate_ba(n: usize, m: usize, stream: RngStream) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::arg(format!("BA model needs 1 <= m < n, got m={m}, n={n}")));
    }
    let mut rng = stream.rng();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    // One entry per edge endpoint: a uniform pick is a degree-proportional pick.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * (m * n));

    for i in 0..=m {
        for j in (i + 1)..=m {
            adj[i].push(j);
            adj[j].push(i);
            endpoints.push(i);
            endpoints.push(j);
        }
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    for v in (m + 1)..n {
        chosen.clear();
        while chosen.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            adj[v].push(t);
            adj[t].push(v);
            endpoints.push(v);
            endpoints.push(t);
        }
    }

    for row in &mut adj {
        row.sort_unstable();
    }
    Ok(Graph::from_sorted_rows(adj, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn expected_edges(n: usize, m: usize) -> usize {
        m * (n - m - 1) + (m + 1) * m / 2
    }

    #[test]
    fn two_nodes_single_edge() {
        let g = generate_ba(2, 1, RngStream::new(1, 0, 0)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn rejects_bad_m() {
        assert!(generate_ba(5, 5, RngStream::new(1, 0, 0)).is_err());
        assert!(generate_ba(5, 0, RngStream::new(1, 0, 0)).is_err());
    }

    #[test]
    fn average_degree_is_two_m() {
        let g = generate_ba(1000, 3, RngStream::new(42, 0, 0)).unwrap();
        assert_eq!(g.edge_count(), expected_edges(1000, 3));
        let avg = 2.0 * g.edge_count() as f64 / 1000.0;
        assert!((avg - 6.0).abs() <= 0.1, "avg degree {avg}");
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_ba(500, 5, RngStream::new(9, 0, 0)).unwrap();
        let b = generate_ba(500, 5, RngStream::new(9, 0, 0)).unwrap();
        let c = generate_ba(500, 5, RngStream::new(10, 0, 0)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn handshake_identity() {
        let g = generate_ba(100, 3, RngStream::new(3, 0, 0)).unwrap();
        let sum: usize = (0..100).map(|i| g.neighbor_list(i).unwrap().degree()).sum();
        assert_eq!(sum, 2 * g.edge_count());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn edge_count_exact(seed in any::<u64>(), m in 1usize..6, extra in 1usize..60) {
            let n = m + extra;
            let g = generate_ba(n, m, RngStream::new(seed, 0, 0)).unwrap();
            prop_assert_eq!(g.edge_count(), expected_edges(n, m));
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
            for i in 0..n {
                prop_assert!(!g.has_edge(i, i));
            }
        }
    }
}

//! Sparse graphs, neighbor lists and labelled collections.

mod generate;
mod io;

pub use generate::generate_ba;
pub use io::{
    parse_edge_list, parse_tudataset, read_edge_list, write_edge_list, write_tudataset,
    IngestStats,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple graph over nodes `0..n` stored as sorted adjacency sets.
///
/// Undirected graphs keep both orientations in `adj` so that row queries are
/// O(degree); the canonical edge set is `{(i, j) : i < j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    directed: bool,
    edges: usize,
}

/// Counters for input lines that were repaired while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl BuildStats {
    pub fn dropped(&self) -> usize {
        self.self_loops + self.duplicates
    }
}

impl Graph {
    pub fn empty(n: usize, directed: bool) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            directed,
            edges: 0,
        }
    }

    /// Builds a graph from `(i, j)` pairs, dropping self-loops and duplicate
    /// pairs. For undirected graphs `(i, j)` and `(j, i)` are the same edge.
    pub fn from_edges<I>(n: usize, directed: bool, pairs: I) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut stats = BuildStats::default();
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::arg(format!(
                    "edge ({i}, {j}) has an endpoint outside 0..{n}"
                )));
            }
            if i == j {
                stats.self_loops += 1;
                continue;
            }
            adj[i].push(j);
            if !directed {
                adj[j].push(i);
            }
        }
        let mut total = 0;
        for row in &mut adj {
            row.sort_unstable();
            let before = row.len();
            row.dedup();
            total += row.len();
            stats.duplicates += before - row.len();
        }
        if !directed {
            stats.duplicates /= 2;
            total /= 2;
        }
        Ok((
            Self {
                adj,
                directed,
                edges: total,
            },
            stats,
        ))
    }

    /// Builds a graph from rows that are already sorted, deduplicated and
    /// loop-free. For undirected graphs the rows must be symmetric.
    pub(crate) fn from_sorted_rows(adj: Vec<Vec<usize>>, directed: bool) -> Self {
        let total: usize = adj.iter().map(Vec::len).sum();
        let edges = if directed { total } else { total / 2 };
        Self {
            adj,
            directed,
            edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Out-neighbors of `i` (all neighbors for undirected graphs), sorted.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.adj.len() && self.adj[i].binary_search(&j).is_ok()
    }

    /// Canonical edges: every directed pair, or `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let directed = self.directed;
        self.adj.iter().enumerate().flat_map(move |(i, row)| {
            row.iter()
                .copied()
                .filter(move |&j| directed || i < j)
                .map(move |j| (i, j))
        })
    }

    pub fn neighbor_list(&self, i: usize) -> Result<NeighborList> {
        if i >= self.node_count() {
            return Err(Error::arg(format!(
                "node {i} out of range for graph with {} nodes",
                self.node_count()
            )));
        }
        Ok(NeighborList {
            owner: i,
            n: self.node_count(),
            bits: self.adj[i].clone(),
        })
    }

    /// Subgraph induced by `nodes`, renumbered densely in the given order.
    /// Returns the subgraph and the map from new ids to original ids.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> (Graph, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            new_id[v] = k;
        }
        let adj = nodes
            .iter()
            .map(|&v| {
                let mut row: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&u| (new_id[u] != usize::MAX).then_some(new_id[u]))
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        (Graph::from_sorted_rows(adj, self.directed), nodes.to_vec())
    }
}

/// Row `owner` of an adjacency matrix of size `n`, as the sorted set of
/// columns holding a 1. The diagonal is always 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborList {
    owner: usize,
    n: usize,
    bits: Vec<usize>,
}

impl NeighborList {
    pub fn new(owner: usize, n: usize, mut bits: Vec<usize>) -> Result<Self> {
        if owner >= n {
            return Err(Error::arg(format!("owner {owner} out of range 0..{n}")));
        }
        bits.sort_unstable();
        bits.dedup();
        if let Some(&last) = bits.last() {
            if last >= n {
                return Err(Error::arg(format!("column {last} out of range 0..{n}")));
            }
        }
        if bits.binary_search(&owner).is_ok() {
            return Err(Error::arg(format!("row {owner} has a 1 on the diagonal")));
        }
        Ok(Self { owner, n, bits })
    }

    /// Caller guarantees `bits` is sorted, unique, in range and off-diagonal.
    pub(crate) fn from_sorted(owner: usize, n: usize, bits: Vec<usize>) -> Self {
        debug_assert!(bits.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(bits.binary_search(&owner).is_err());
        Self { owner, n, bits }
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn degree(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[usize] {
        &self.bits
    }

    pub fn contains(&self, j: usize) -> bool {
        self.bits.binary_search(&j).is_ok()
    }

    pub fn into_bits(self) -> Vec<usize> {
        self.bits
    }
}

/// A named sequence of graphs with optional per-graph class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCollection {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub labels: Option<Vec<i64>>,
}

impl GraphCollection {
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, labels: Option<Vec<i64>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != graphs.len() {
                return Err(Error::arg(format!(
                    "{} labels for {} graphs",
                    l.len(),
                    graphs.len()
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            graphs,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Largest node count over all graphs (`n_max` in the budget allocator).
    pub fn max_nodes(&self) -> usize {
        self.graphs.iter().map(Graph::node_count).max().unwrap_or(0)
    }

    pub fn distinct_labels(&self) -> Vec<i64> {
        let mut l = self.labels.clone().unwrap_or_default();
        l.sort_unstable();
        l.dedup();
        l
    }
}

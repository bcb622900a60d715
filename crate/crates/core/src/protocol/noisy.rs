use serde::{Deserialize, Serialize};

use super::config::{PrivacyConfig, Symmetrize};
use super::roles::Role;
use crate::graph::Graph;
use crate::mechanisms::BudgetSplit;
use crate::rng::RngStream;

/// What the server learned about one user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserMeta {
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Edge-LDP level of the user's report; `None` when the row was
    /// published or withheld.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl UserMeta {
    pub(crate) fn public(role: Role) -> Self {
        Self {
            role,
            d_star: None,
            q: None,
            p: None,
            epsilon: None,
        }
    }
}

/// Where a noisy graph came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: PrivacyConfig,
    pub stream: RngStream,
    /// Budget split applied to private users, when the mechanism splits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<BudgetSplit>,
    /// Original node id of every row, when rows were renumbered.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_map: Option<Vec<usize>>,
}

/// The server's view after one protocol round: one noisy row per user.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyGraph {
    pub(crate) rows: Vec<Vec<usize>>,
    pub(crate) symmetric: bool,
    pub(crate) users: Vec<UserMeta>,
    pub(crate) provenance: Provenance,
}

impl NoisyGraph {
    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn noisy_degree(&self, i: usize) -> usize {
        self.rows[i].len()
    }

    /// Number of 1s across all rows (each undirected edge counts twice when
    /// the relation is symmetric).
    pub fn ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Number of edges of [`Self::to_graph`].
    pub fn edge_count(&self) -> usize {
        if self.symmetric {
            self.ones() / 2
        } else {
            self.ones()
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn users(&self) -> &[UserMeta] {
        &self.users
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Directed graph of the rows, or undirected when the relation is
    /// symmetric.
    pub fn to_graph(&self) -> Graph {
        Graph::from_sorted_rows(self.rows.clone(), !self.symmetric)
    }

    /// Heap bytes held by the rows.
    pub fn heap_bytes(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.capacity() * std::mem::size_of::<usize>())
            .sum::<usize>()
            + self.rows.capacity() * std::mem::size_of::<Vec<usize>>()
    }

    pub(crate) fn from_parts(
        rows: Vec<Vec<usize>>,
        symmetric: bool,
        users: Vec<UserMeta>,
        provenance: Provenance,
    ) -> Self {
        debug_assert!(!symmetric || is_symmetric_rows(&rows));
        Self {
            rows,
            symmetric,
            users,
            provenance,
        }
    }

    /// Union or intersection of the two orientations of every pair.
    pub fn symmetrize(&self, mode: Symmetrize) -> NoisyGraph {
        let rows = match mode {
            Symmetrize::None => return self.clone(),
            Symmetrize::Union => {
                let mut rows = self.rows.clone();
                for (i, row) in self.rows.iter().enumerate() {
                    for &j in row {
                        if self.rows[j].binary_search(&i).is_err() {
                            rows[j].push(i);
                        }
                    }
                }
                for r in &mut rows {
                    r.sort_unstable();
                }
                rows
            }
            Symmetrize::Intersection => self
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .copied()
                        .filter(|&j| self.rows[j].binary_search(&i).is_ok())
                        .collect()
                })
                .collect(),
        };
        let mut provenance = self.provenance.clone();
        provenance.config.symmetrize = mode;
        NoisyGraph {
            rows,
            symmetric: true,
            users: self.users.clone(),
            provenance,
        }
    }
}

pub(crate) fn is_symmetric_rows(rows: &[Vec<usize>]) -> bool {
    rows.iter()
        .enumerate()
        .all(|(i, row)| row.iter().all(|&j| rows[j].binary_search(&i).is_ok()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::Mechanism;

    fn noisy(rows: Vec<Vec<usize>>) -> NoisyGraph {
        let n = rows.len();
        NoisyGraph {
            rows,
            symmetric: false,
            users: vec![UserMeta::public(Role::Private); n],
            provenance: Provenance {
                config: PrivacyConfig::common(Mechanism::NonprivFull, 1.0, n),
                stream: RngStream::new(0, 0, 0),
                split: None,
                node_map: None,
            },
        }
    }

    #[test]
    fn union_adds_reverse() {
        let g = noisy(vec![vec![1], vec![]]).symmetrize(Symmetrize::Union);
        assert_eq!(g.rows, vec![vec![1], vec![0]]);
        assert!(g.is_symmetric());
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn intersection_drops_one_sided() {
        let g = noisy(vec![vec![1], vec![]]).symmetrize(Symmetrize::Intersection);
        assert_eq!(g.rows, vec![Vec::<usize>::new(), vec![]]);
    }

    #[test]
    fn symmetric_input_is_fixed_point() {
        let rows = vec![vec![1, 2], vec![0], vec![0]];
        for mode in [Symmetrize::Union, Symmetrize::Intersection] {
            assert_eq!(noisy(rows.clone()).symmetrize(mode).rows, rows);
        }
    }
}

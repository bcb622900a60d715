//! On-disk form of a [`NoisyGraph`]: an edge list plus a JSON sidecar.
//!
//! `graph_NNNNN.edgelist` holds `# n=` and `# directed=` headers followed by
//! one `i j` pair per line: every 1 of every row for directed views, each
//! pair once (`i < j`) for symmetric ones. `graph_NNNNN.meta.json` holds the
//! provenance and, optionally, per-user metadata.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::noisy::{NoisyGraph, Provenance, UserMeta};
use crate::error::{Error, Result};
use crate::graph::{read_edge_list, write_edge_list};

pub const NOISY_FORMAT: &str = "dprr-noisy-graph/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyGraphMeta {
    pub format: String,
    pub n: usize,
    pub symmetric: bool,
    pub edges: usize,
    pub mechanism: super::Mechanism,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_epsilon: Option<f64>,
    pub rho: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub users: Option<Vec<UserMeta>>,
}

pub fn graph_file_stem(index: usize) -> String {
    format!("graph_{index:05}")
}

pub fn noisy_paths(dir: &Path, index: usize) -> (PathBuf, PathBuf) {
    let stem = graph_file_stem(index);
    (
        dir.join(format!("{stem}.edgelist")),
        dir.join(format!("{stem}.meta.json")),
    )
}

pub fn noisy_meta(noisy: &NoisyGraph, with_users: bool) -> NoisyGraphMeta {
    let p = noisy.provenance();
    NoisyGraphMeta {
        format: NOISY_FORMAT.to_string(),
        n: noisy.node_count(),
        symmetric: noisy.is_symmetric(),
        edges: noisy.edge_count(),
        mechanism: p.config.mechanism,
        epsilon: p.config.epsilon,
        epsilon_1: p.split.map(|s| s.epsilon_1),
        epsilon_2: p.split.map(|s| s.epsilon_2),
        effective_epsilon: p.split.map(|s| s.effective_epsilon()),
        rho: p.config.rho,
        provenance: p.clone(),
        users: with_users.then(|| noisy.users().to_vec()),
    }
}

/// Writes graph `index` of a run into `dir`.
pub fn write_noisy(dir: &Path, index: usize, noisy: &NoisyGraph, with_users: bool) -> Result<()> {
    let (edges_path, meta_path) = noisy_paths(dir, index);
    write_edge_list(&edges_path, &noisy.to_graph())?;
    let meta = noisy_meta(noisy, with_users);
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

/// Reads graph `index` of a run. Per-user metadata is empty when it was not
/// written.
pub fn read_noisy(dir: &Path, index: usize) -> Result<NoisyGraph> {
    let (edges_path, meta_path) = noisy_paths(dir, index);
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::Format {
        path: meta_path.clone(),
        message: format!("cannot read metadata: {e}"),
    })?;
    let meta: NoisyGraphMeta = serde_json::from_str(&text).map_err(|e| Error::Format {
        path: meta_path.clone(),
        message: e.to_string(),
    })?;
    if meta.format != NOISY_FORMAT {
        return Err(Error::Format {
            path: meta_path,
            message: format!("unsupported format {:?}", meta.format),
        });
    }
    let graph = read_edge_list(&edges_path)?;
    if graph.node_count() != meta.n || graph.is_directed() == meta.symmetric {
        return Err(Error::Format {
            path: edges_path,
            message: format!(
                "edge list header (n={}, directed={}) disagrees with metadata (n={}, symmetric={})",
                graph.node_count(),
                graph.is_directed(),
                meta.n,
                meta.symmetric
            ),
        });
    }
    let rows = (0..graph.node_count()).map(|i| graph.neighbors(i).to_vec()).collect();
    Ok(NoisyGraph::from_parts(
        rows,
        meta.symmetric,
        meta.users.unwrap_or_default(),
        meta.provenance,
    ))
}

/// Number of consecutive `graph_NNNNN.meta.json` files in `dir`.
pub fn count_noisy(dir: &Path) -> usize {
    (0..).take_while(|&i| noisy_paths(dir, i).1.exists()).count()
}

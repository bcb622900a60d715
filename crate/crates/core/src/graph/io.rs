//! TUDataset and plain edge-list readers and writers.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Graph, GraphCollection};
use crate::error::{Error, Result};

/// Input lines dropped while reading a collection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub self_loops: usize,
    pub duplicate_lines: usize,
}

impl IngestStats {
    pub fn warnings(&self) -> usize {
        self.self_loops + self.duplicate_lines
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: format!("cannot read file: {e}"),
    })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn tu_path(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

/// Reads a TUDataset-format collection (`<name>_A.txt`,
/// `<name>_graph_indicator.txt`, `<name>_graph_labels.txt`).
///
/// Global 1-based node ids are renumbered to 0-based ids per graph in
/// increasing global order. Every node listed in the indicator is kept, even
/// if it has no edges. Self-loops and repeated `row, col` lines are dropped
/// and counted in the returned [`IngestStats`].
pub fn parse_tudataset(dir: &Path, name: &str) -> Result<(GraphCollection, IngestStats)> {
    let a_path = tu_path(dir, name, "A");
    let ind_path = tu_path(dir, name, "graph_indicator");
    let lab_path = tu_path(dir, name, "graph_labels");
    let a_text = read_file(&a_path)?;
    let ind_text = read_file(&ind_path)?;
    let lab_text = read_file(&lab_path)?;

    // graph id (0-based) and local id of every global node
    let mut node_graph: Vec<usize> = Vec::new();
    let mut node_local: Vec<usize> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for (lineno, line) in ind_text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let gid: usize = t
            .parse()
            .map_err(|_| parse_err(&ind_path, lineno + 1, format!("bad graph id {t:?}")))?;
        if gid == 0 {
            return Err(parse_err(&ind_path, lineno + 1, "graph ids are 1-based"));
        }
        let g = gid - 1;
        if g >= sizes.len() {
            sizes.resize(g + 1, 0);
        }
        node_graph.push(g);
        node_local.push(sizes[g]);
        sizes[g] += 1;
    }
    let node_total = node_graph.len();

    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sizes.len()];
    let mut stats = IngestStats::default();
    for (lineno, line) in a_text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split(',').map(str::trim);
        let (Some(r), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(&a_path, lineno + 1, format!("expected \"row, col\", got {t:?}")));
        };
        let parse_id = |s: &str| -> Result<usize> {
            let id: usize = s
                .parse()
                .map_err(|_| parse_err(&a_path, lineno + 1, format!("bad node id {s:?}")))?;
            if id == 0 || id > node_total {
                return Err(parse_err(
                    &a_path,
                    lineno + 1,
                    format!("node id {id} outside declared range 1..={node_total}"),
                ));
            }
            Ok(id - 1)
        };
        let (r, c) = (parse_id(r)?, parse_id(c)?);
        if node_graph[r] != node_graph[c] {
            return Err(parse_err(
                &a_path,
                lineno + 1,
                format!("edge joins nodes of graphs {} and {}", node_graph[r] + 1, node_graph[c] + 1),
            ));
        }
        if r == c {
            stats.self_loops += 1;
            continue;
        }
        pairs[node_graph[r]].push((node_local[r], node_local[c]));
    }

    let mut graphs = Vec::with_capacity(sizes.len());
    for (g, mut p) in pairs.into_iter().enumerate() {
        p.sort_unstable();
        let before = p.len();
        p.dedup();
        stats.duplicate_lines += before - p.len();
        let (graph, _) = Graph::from_edges(sizes[g], false, p)?;
        graphs.push(graph);
    }

    let mut labels = Vec::with_capacity(graphs.len());
    for (lineno, line) in lab_text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        labels.push(
            t.parse::<i64>()
                .map_err(|_| parse_err(&lab_path, lineno + 1, format!("bad label {t:?}")))?,
        );
    }
    if labels.len() != graphs.len() {
        return Err(Error::Format {
            path: lab_path,
            message: format!("{} labels for {} graphs", labels.len(), graphs.len()),
        });
    }
    if stats.warnings() > 0 {
        log::warn!(
            "{name}: dropped {} self-loop and {} duplicate edge lines",
            stats.self_loops,
            stats.duplicate_lines
        );
    }
    Ok((GraphCollection::new(name, graphs, Some(labels))?, stats))
}

/// Writes a collection in TUDataset format. Undirected edges are written in
/// both orientations. Collections without labels get label 0 throughout.
pub fn write_tudataset(dir: &Path, collection: &GraphCollection) -> Result<()> {
    fs::create_dir_all(dir)?;
    let name = &collection.name;
    let mut a = BufWriter::new(fs::File::create(tu_path(dir, name, "A"))?);
    let mut ind = BufWriter::new(fs::File::create(tu_path(dir, name, "graph_indicator"))?);
    let mut lab = BufWriter::new(fs::File::create(tu_path(dir, name, "graph_labels"))?);
    let mut offset = 0usize;
    for (g, graph) in collection.graphs.iter().enumerate() {
        for i in 0..graph.node_count() {
            writeln!(ind, "{}", g + 1)?;
            for &j in graph.neighbors(i) {
                writeln!(a, "{}, {}", offset + i + 1, offset + j + 1)?;
            }
        }
        offset += graph.node_count();
    }
    match &collection.labels {
        Some(labels) => {
            for l in labels {
                writeln!(lab, "{l}")?;
            }
        }
        None => {
            log::warn!("{name}: collection has no labels, writing 0 for every graph");
            for _ in &collection.graphs {
                writeln!(lab, "0")?;
            }
        }
    }
    a.flush()?;
    ind.flush()?;
    lab.flush()?;
    Ok(())
}

struct EdgeListFile {
    pairs: Vec<(usize, usize)>,
    lines: Vec<usize>,
    n: Option<usize>,
    directed: Option<bool>,
}

fn scan_edge_list(path: &Path) -> Result<EdgeListFile> {
    let text = read_file(path)?;
    let mut out = EdgeListFile {
        pairs: Vec::new(),
        lines: Vec::new(),
        n: None,
        directed: None,
    };
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(comment) = t.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("n=") {
                out.n = v.trim().parse().ok();
            } else if let Some(v) = comment.strip_prefix("directed=") {
                out.directed = v.trim().parse().ok();
            }
            continue;
        }
        let mut it = t.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(path, lineno + 1, format!("expected \"i j\", got {t:?}")));
        };
        let i = a
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, format!("bad node index {a:?}")))?;
        let j = b
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, format!("bad node index {b:?}")))?;
        out.pairs.push((i, j));
        out.lines.push(lineno + 1);
    }
    Ok(out)
}

/// Reads 0-based `i j` pairs against a declared node count.
pub fn parse_edge_list(path: &Path, n: usize, directed: bool) -> Result<Graph> {
    let file = scan_edge_list(path)?;
    if let Some(pos) = file.pairs.iter().position(|&(i, j)| i >= n || j >= n) {
        let (i, j) = file.pairs[pos];
        return Err(parse_err(
            path,
            file.lines[pos],
            format!("pair ({i}, {j}) exceeds node count {n}"),
        ));
    }
    Ok(Graph::from_edges(n, directed, file.pairs)?.0)
}

/// Reads an edge list, taking `n` and directedness from `# n=` and
/// `# directed=` header comments when present. Without a header, `n` is one
/// more than the largest index and the graph is undirected.
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let file = scan_edge_list(path)?;
    let n = file.n.unwrap_or_else(|| {
        file.pairs
            .iter()
            .map(|&(i, j)| i.max(j) + 1)
            .max()
            .unwrap_or(0)
    });
    let directed = file.directed.unwrap_or(false);
    if let Some(pos) = file.pairs.iter().position(|&(i, j)| i >= n || j >= n) {
        return Err(parse_err(
            path,
            file.lines[pos],
            format!("pair exceeds declared n={n}"),
        ));
    }
    Ok(Graph::from_edges(n, directed, file.pairs)?.0)
}

/// Writes a graph with `# n=` / `# directed=` headers and one canonical edge
/// per line.
pub fn write_edge_list(path: &Path, graph: &Graph) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "# n={}", graph.node_count())?;
    writeln!(w, "# directed={}", graph.is_directed())?;
    for (i, j) in graph.edges() {
        writeln!(w, "{i} {j}")?;
    }
    w.flush()?;
    Ok(())
}

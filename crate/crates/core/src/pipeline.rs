//! File-level commands: generate, obfuscate, stats, bench, export and replay.
//!
//! Every command writes its outputs under one directory and finishes by
//! writing `manifest.json`, which records the full command so that
//! [`replay`] can regenerate the same files.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{bench_scaling, degree_report, DegreeReport, ScalingAxis, ScalingRecord};
use crate::error::{Error, Result};
use crate::graph::{
    generate_ba, parse_tudataset, read_edge_list, write_edge_list, write_tudataset, Graph,
    GraphCollection,
};
use crate::mechanisms::{BudgetMode, BudgetSplit};
use crate::par::Exec;
use crate::protocol::{
    count_noisy, graph_file_stem, private_split, read_noisy, run_protocol_exec, write_noisy,
    Mechanism, PrivacyConfig, Symmetrize,
};
use crate::rng::RngStream;

pub const TOOL_NAME: &str = "dprr";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST_FILE: &str = "manifest.json";
pub const LABELS_FILE: &str = "labels.txt";

/// RR output larger than this multiple of the input edge count is flagged.
pub const DENSE_OUTPUT_FACTOR: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Tudataset,
    Edgelist,
}

/// Where a graph collection is read from.
///
/// A TUDataset input is a directory holding `<name>_A.txt` and friends; the
/// name defaults to the directory name. An edge-list input is either one
/// file or a directory of `*.edgelist` files read in name order, with
/// optional labels in `labels.txt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub path: PathBuf,
    pub format: InputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn dir_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graphs".to_string())
}

fn read_labels(path: &Path) -> Result<Vec<i64>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            l.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: k + 1,
                message: format!("bad label {l:?}"),
            })
        })
        .collect()
}

fn write_labels(path: &Path, labels: &[i64]) -> Result<()> {
    let mut s = String::new();
    for l in labels {
        writeln!(s, "{l}").expect("write to string");
    }
    fs::write(path, s)?;
    Ok(())
}

pub fn load_collection(spec: &InputSpec) -> Result<GraphCollection> {
    match spec.format {
        InputFormat::Tudataset => {
            let name = spec.name.clone().unwrap_or_else(|| dir_name(&spec.path));
            Ok(parse_tudataset(&spec.path, &name)?.0)
        }
        InputFormat::Edgelist => {
            let name = spec.name.clone().unwrap_or_else(|| {
                spec.path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "graphs".to_string())
            });
            if spec.path.is_file() {
                return GraphCollection::new(name, vec![read_edge_list(&spec.path)?], None);
            }
            if !spec.path.is_dir() {
                return Err(Error::Format {
                    path: spec.path.clone(),
                    message: "no such file or directory".into(),
                });
            }
            let mut files: Vec<PathBuf> = fs::read_dir(&spec.path)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            files.retain(|p| p.extension().is_some_and(|e| e == "edgelist"));
            files.sort();
            if files.is_empty() {
                return Err(Error::Format {
                    path: spec.path.clone(),
                    message: "directory holds no .edgelist files".into(),
                });
            }
            let graphs = files.iter().map(|f| read_edge_list(f)).collect::<Result<_>>()?;
            let labels_path = spec.path.join(LABELS_FILE);
            let labels = if labels_path.exists() {
                Some(read_labels(&labels_path)?)
            } else {
                None
            };
            GraphCollection::new(name, graphs, labels)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphModel {
    Ba,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateOptions {
    pub model: GraphModel,
    pub n: usize,
    pub m: usize,
    pub count: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObfuscateOptions {
    pub input: InputSpec,
    pub mechanism: Mechanism,
    pub epsilon: f64,
    pub alpha: f64,
    pub rho: f64,
    pub symmetrize: Symmetrize,
    pub seed: u64,
    /// Overrides the collection's largest node count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub budget_mode: BudgetMode,
    /// Also store per-user `d*`, `q` and roles in the sidecars.
    #[serde(default)]
    pub with_users: bool,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsOptions {
    pub input: InputSpec,
    pub mechanism: Mechanism,
    pub epsilon: f64,
    pub alpha: f64,
    pub rho: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub budget_mode: BudgetMode,
    /// Evaluate the bias and variance gates.
    pub check: bool,
    pub gates: GateOptions,
    pub out: PathBuf,
}

/// Thresholds of the `stats --check` gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateOptions {
    /// Bias gate covers users with degree up to this value.
    pub bias_max_degree: usize,
    /// Allowed `|mean(d~) - d|` is `max(1, bias_rel_tol * d)`.
    pub bias_rel_tol: f64,
    /// Allowed sample variance is this multiple of the reference bound.
    pub variance_factor: f64,
}

impl Default for GateOptions {
    fn default() -> Self {
        Self {
            bias_max_degree: 50,
            bias_rel_tol: 0.15,
            variance_factor: 1.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOptions {
    pub axis: ScalingAxis,
    /// Graph to subsample; its first graph is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSpec>,
    pub mechanisms: Vec<Mechanism>,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportOptions {
    /// Output directory of an `obfuscate` run.
    pub input: PathBuf,
    /// Dataset name of the written files; defaults to the name recorded by
    /// the obfuscate run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    Generate(GenerateOptions),
    Obfuscate(ObfuscateOptions),
    Stats(StatsOptions),
    Bench(BenchOptions),
    Export(ExportOptions),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Obfuscate(_) => "obfuscate",
            Command::Stats(_) => "stats",
            Command::Bench(_) => "bench",
            Command::Export(_) => "export",
        }
    }

    pub fn out(&self) -> &Path {
        match self {
            Command::Generate(o) => &o.out,
            Command::Obfuscate(o) => &o.out,
            Command::Stats(o) => &o.out,
            Command::Bench(o) => &o.out,
            Command::Export(o) => &o.out,
        }
    }

    pub fn set_out(&mut self, out: PathBuf) {
        match self {
            Command::Generate(o) => o.out = out,
            Command::Obfuscate(o) => o.out = out,
            Command::Stats(o) => o.out = out,
            Command::Bench(o) => o.out = out,
            Command::Export(o) => o.out = out,
        }
    }
}

/// Record of one command run, written last into the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub spec: Command,
    pub exec: Exec,
    /// Files written, relative to the output directory, in write order.
    pub outputs: Vec<String>,
    /// Budget split of private users, when the mechanism splits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<BudgetSplit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_epsilon: Option<f64>,
    /// Name of the input collection, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection: Option<String>,
    /// `true`/`false` when `stats --check` evaluated its gates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gates_passed: Option<bool>,
}

impl RunManifest {
    fn new(spec: &Command, exec: Exec) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            spec: spec.clone(),
            exec,
            outputs: Vec::new(),
            budget: None,
            effective_epsilon: None,
            collection: None,
            gates_passed: None,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    fn write(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(dir.join(MANIFEST_FILE), text)?;
        Ok(())
    }
}

/// Runs a command and writes its manifest.
pub fn run(spec: &Command, exec: Exec) -> Result<RunManifest> {
    let out = spec.out();
    fs::create_dir_all(out)?;
    let mut manifest = RunManifest::new(spec, exec);
    match spec {
        Command::Generate(o) => run_generate(o, exec, &mut manifest)?,
        Command::Obfuscate(o) => run_obfuscate(o, exec, &mut manifest)?,
        Command::Stats(o) => run_stats(o, exec, &mut manifest)?,
        Command::Bench(o) => run_bench(o, exec, &mut manifest)?,
        Command::Export(o) => run_export(o, &mut manifest)?,
    }
    manifest.write(out)?;
    Ok(manifest)
}

/// Re-runs the command recorded in `manifest` with its outputs redirected
/// to `out`.
pub fn replay(manifest: &Path, out: &Path) -> Result<RunManifest> {
    let recorded = RunManifest::read(manifest)?;
    if recorded.tool != TOOL_NAME {
        return Err(Error::Format {
            path: manifest.to_path_buf(),
            message: format!("manifest written by {:?}", recorded.tool),
        });
    }
    if recorded.version != TOOL_VERSION {
        log::warn!(
            "manifest written by version {}, replaying with {TOOL_VERSION}",
            recorded.version
        );
    }
    let mut spec = recorded.spec;
    spec.set_out(out.to_path_buf());
    run(&spec, recorded.exec)
}

fn run_generate(o: &GenerateOptions, exec: Exec, manifest: &mut RunManifest) -> Result<()> {
    if o.count == 0 {
        return Err(Error::arg("count must be at least 1"));
    }
    let GraphModel::Ba = o.model;
    let root = RngStream::new(o.seed, 0, 0);
    let graphs = exec.map_range(o.count, |k| generate_ba(o.n, o.m, root.graph(k)));
    for (k, g) in graphs.into_iter().enumerate() {
        let file = format!("{}.edgelist", graph_file_stem(k));
        write_edge_list(&o.out.join(&file), &g?)?;
        manifest.outputs.push(file);
    }
    Ok(())
}

fn privacy_config(
    mechanism: Mechanism,
    epsilon: f64,
    alpha: f64,
    rho: f64,
    seed: u64,
    n_max: usize,
    budget_mode: BudgetMode,
) -> Result<PrivacyConfig> {
    if mechanism == Mechanism::NonprivPart && rho <= 0.0 {
        return Err(Error::arg("nonpriv-part needs rho > 0, otherwise every row is withheld"));
    }
    let cfg = PrivacyConfig {
        mechanism,
        epsilon,
        alpha,
        rho,
        role_seed: seed,
        n_max,
        symmetrize: Symmetrize::None,
        budget_mode,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn record_budget(cfg: &PrivacyConfig, manifest: &mut RunManifest) -> Result<()> {
    if cfg.rho >= 1.0 {
        return Ok(());
    }
    let split = private_split(cfg)?;
    manifest.budget = split;
    manifest.effective_epsilon = match cfg.mechanism {
        Mechanism::Dprr | Mechanism::LocalLap => split.map(|s| s.effective_epsilon()),
        Mechanism::Rr => Some(cfg.epsilon),
        _ => None,
    };
    if let Some(s) = split.filter(|s| s.overspent()) {
        log::warn!(
            "degree-noise floor raised the spend: effective epsilon {} exceeds nominal {}",
            s.effective_epsilon(),
            s.epsilon_total
        );
    }
    Ok(())
}

/// Work split between graphs and users: a lone graph parallelizes over its
/// users, a collection over its graphs.
fn split_exec(exec: Exec, graphs: usize) -> (Exec, Exec) {
    if graphs > 1 {
        (exec, Exec::Sequential)
    } else {
        (Exec::Sequential, exec)
    }
}

fn run_obfuscate(o: &ObfuscateOptions, exec: Exec, manifest: &mut RunManifest) -> Result<()> {
    let collection = load_collection(&o.input)?;
    let n_max = o.n_max.unwrap_or_else(|| collection.max_nodes());
    let cfg = privacy_config(o.mechanism, o.epsilon, o.alpha, o.rho, o.seed, n_max, o.budget_mode)?
        .with_symmetrize(o.symmetrize);
    record_budget(&cfg, manifest)?;
    manifest.collection = Some(collection.name.clone());
    let root = RngStream::new(o.seed, 0, 0);

    let (outer, inner) = split_exec(exec, collection.len());
    let results: Vec<Result<(usize, usize)>> = outer.map_slice(&collection.graphs, |k, g| {
        let noisy = run_protocol_exec(g, &cfg, root.graph(k), inner)?;
        write_noisy(&o.out, k, &noisy, o.with_users)?;
        Ok((g.edge_count(), noisy.edge_count()))
    });
    let mut in_edges = 0;
    let mut out_edges = 0;
    for (k, r) in results.into_iter().enumerate() {
        let (a, b) = r?;
        in_edges += a;
        out_edges += b;
        let stem = graph_file_stem(k);
        manifest.outputs.push(format!("{stem}.edgelist"));
        manifest.outputs.push(format!("{stem}.meta.json"));
    }
    if let Some(labels) = &collection.labels {
        write_labels(&o.out.join(LABELS_FILE), labels)?;
        manifest.outputs.push(LABELS_FILE.into());
    }
    if o.mechanism == Mechanism::Rr && out_edges > DENSE_OUTPUT_FACTOR * in_edges {
        log::warn!(
            "dense output: RR produced {out_edges} edges from {in_edges} input edges; \
             its output grows with n^2 regardless of sparsity"
        );
    }
    log::info!("obfuscated {} graphs: {in_edges} -> {out_edges} edges", collection.len());
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn write_degree_csv(path: &Path, report: &DegreeReport) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "user,d,mean_d_tilde,var_d_tilde,q,d_star")?;
    for u in &report.users {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            u.user,
            u.d,
            u.mean_d_tilde,
            u.var_d_tilde,
            opt(u.mean_q),
            opt(u.mean_d_star)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Aggregate written to `summary.json` by `stats`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub config: PrivacyConfig,
    pub trials: usize,
    pub graphs: usize,
    pub users: usize,
    pub mean_bias: f64,
    pub mean_abs_error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance_bound: Option<f64>,
    pub max_variance: f64,
    pub gates: GateOptions,
    pub bias_violations: usize,
    pub variance_violations: usize,
}

impl StatsSummary {
    pub fn passed(&self) -> bool {
        self.bias_violations == 0 && self.variance_violations == 0
    }
}

fn run_stats(o: &StatsOptions, exec: Exec, manifest: &mut RunManifest) -> Result<()> {
    if o.trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    let collection = load_collection(&o.input)?;
    let n_max = o.n_max.unwrap_or_else(|| collection.max_nodes());
    let cfg = privacy_config(o.mechanism, o.epsilon, o.alpha, o.rho, o.seed, n_max, o.budget_mode)?;
    record_budget(&cfg, manifest)?;
    manifest.collection = Some(collection.name.clone());
    let root = RngStream::new(o.seed, 0, 0);

    let (outer, inner) = split_exec(exec, collection.len());
    let reports: Vec<Result<DegreeReport>> = outer.map_slice(&collection.graphs, |k, g| {
        degree_report(g, &cfg, o.trials, root.graph(k), inner)
    });
    let mut all = Vec::with_capacity(reports.len());
    for (k, r) in reports.into_iter().enumerate() {
        let r = r?;
        let file = format!("degree_report_{k:05}.csv");
        write_degree_csv(&o.out.join(&file), &r)?;
        manifest.outputs.push(file);
        all.push(r);
    }
    let merged = DegreeReport::merge(all).expect("collection is non-empty");

    let mut records = BufWriter::new(fs::File::create(o.out.join("records.jsonl"))?);
    for u in &merged.users {
        serde_json::to_writer(&mut records, u)?;
        records.write_all(b"\n")?;
    }
    records.flush()?;
    manifest.outputs.push("records.jsonl".into());

    let bias = merged.bias_violations(o.gates.bias_max_degree, o.gates.bias_rel_tol);
    let var = merged.variance_violations(o.gates.variance_factor);
    let summary = StatsSummary {
        config: cfg,
        trials: o.trials,
        graphs: collection.len(),
        users: merged.users.len(),
        mean_bias: merged.mean_bias(),
        mean_abs_error: merged.mean_abs_error,
        variance_bound: merged.variance_bound(),
        max_variance: merged.users.iter().map(|u| u.var_d_tilde).fold(0.0, f64::max),
        gates: o.gates,
        bias_violations: bias.len(),
        variance_violations: var.len(),
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    fs::write(o.out.join("summary.json"), text)?;
    manifest.outputs.push("summary.json".into());

    if o.check {
        for v in bias.iter().take(5) {
            log::warn!(
                "bias gate: graph {} user {} has d={} but mean noisy degree {:.3} (limit {:.3})",
                v.graph,
                v.user,
                v.d,
                v.observed,
                v.limit
            );
        }
        for v in var.iter().take(5) {
            log::warn!(
                "variance gate: graph {} user {} has variance {:.3} above {:.3}",
                v.graph,
                v.user,
                v.observed,
                v.limit
            );
        }
        manifest.gates_passed = Some(summary.passed());
    }
    Ok(())
}

fn write_scaling_csv(path: &Path, records: &[ScalingRecord]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "mechanism,param,n,edges,output_ones,seconds,resident_bytes")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.mechanism, r.param, r.n, r.edges, r.output_ones, r.seconds, r.resident_bytes
        )?;
    }
    w.flush()?;
    Ok(())
}

fn run_bench(o: &BenchOptions, exec: Exec, manifest: &mut RunManifest) -> Result<()> {
    let base: Option<Graph> = match (&o.axis, &o.input) {
        (ScalingAxis::Subsample { .. }, Some(spec)) => {
            let c = load_collection(spec)?;
            manifest.collection = Some(c.name.clone());
            c.graphs.into_iter().next()
        }
        (ScalingAxis::Subsample { .. }, None) => {
            return Err(Error::arg("subsample scaling needs an input graph"));
        }
        _ => None,
    };
    let records = bench_scaling(&o.axis, base.as_ref(), &o.mechanisms, o.epsilon, o.trials, o.seed, exec)?;
    write_scaling_csv(&o.out.join("scaling.csv"), &records)?;
    manifest.outputs.push("scaling.csv".into());
    Ok(())
}

fn run_export(o: &ExportOptions, manifest: &mut RunManifest) -> Result<()> {
    let count = count_noisy(&o.input);
    if count == 0 {
        return Err(Error::Format {
            path: o.input.clone(),
            message: "no noisy graphs found".into(),
        });
    }
    let recorded = RunManifest::read(&o.input.join(MANIFEST_FILE)).ok();
    let name = o
        .name
        .clone()
        .or_else(|| recorded.as_ref().and_then(|m| m.collection.clone()))
        .unwrap_or_else(|| dir_name(&o.input));

    let mut graphs = Vec::with_capacity(count);
    let mut warned = false;
    for k in 0..count {
        let noisy = read_noisy(&o.input, k)?;
        let view = if noisy.is_symmetric() {
            noisy
        } else {
            if !warned {
                log::warn!("run kept directed rows; exporting the union of both orientations");
                warned = true;
            }
            noisy.symmetrize(Symmetrize::Union)
        };
        let g = view.to_graph();
        if g.node_count() != view.node_count() || g.is_directed() {
            return Err(Error::Export(format!("graph {k}: inconsistent node count or orientation")));
        }
        graphs.push(g);
    }
    let labels_path = o.input.join(LABELS_FILE);
    let labels = if labels_path.exists() {
        let labels = read_labels(&labels_path)?;
        if labels.len() != count {
            return Err(Error::Export(format!(
                "{} labels for {count} graphs",
                labels.len()
            )));
        }
        Some(labels)
    } else {
        None
    };
    let collection = GraphCollection::new(name.clone(), graphs, labels)
        .map_err(|e| Error::Export(e.to_string()))?;
    write_tudataset(&o.out, &collection)?;
    for suffix in ["A", "graph_indicator", "graph_labels"] {
        manifest.outputs.push(format!("{name}_{suffix}.txt"));
    }
    manifest.collection = Some(name);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::DEFAULT_ALPHA;
    use tempfile::tempdir;

    fn generate(dir: &Path, n: usize, count: usize, seed: u64) -> RunManifest {
        run(
            &Command::Generate(GenerateOptions {
                model: GraphModel::Ba,
                n,
                m: 3,
                count,
                seed,
                out: dir.to_path_buf(),
            }),
            Exec::default(),
        )
        .unwrap()
    }

    fn obfuscate(input: &Path, out: &Path, mechanism: Mechanism, symmetrize: Symmetrize) -> ObfuscateOptions {
        ObfuscateOptions {
            input: InputSpec {
                path: input.to_path_buf(),
                format: InputFormat::Edgelist,
                name: Some("ba".into()),
            },
            mechanism,
            epsilon: 1.0,
            alpha: DEFAULT_ALPHA,
            rho: 0.0,
            symmetrize,
            seed: 9,
            n_max: None,
            budget_mode: BudgetMode::Nominal,
            with_users: false,
            out: out.to_path_buf(),
        }
    }

    #[test]
    fn generate_is_deterministic() {
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        generate(a.path(), 100, 2, 5);
        let m = generate(b.path(), 100, 2, 5);
        assert_eq!(m.outputs.len(), 2);
        for f in &m.outputs {
            assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
        }
    }

    #[test]
    fn nonpriv_full_round_trips_through_export() {
        let dir = tempdir().unwrap();
        let gen = dir.path().join("gen");
        let run_dir = dir.path().join("run");
        let exp = dir.path().join("exp");
        generate(&gen, 60, 3, 1);
        write_labels(&gen.join(LABELS_FILE), &[0, 1, 0]).unwrap();
        run(
            &Command::Obfuscate(obfuscate(&gen, &run_dir, Mechanism::NonprivFull, Symmetrize::None)),
            Exec::default(),
        )
        .unwrap();
        run(
            &Command::Export(ExportOptions {
                input: run_dir.clone(),
                name: None,
                out: exp.clone(),
            }),
            Exec::default(),
        )
        .unwrap();
        let original = load_collection(&InputSpec {
            path: gen.clone(),
            format: InputFormat::Edgelist,
            name: Some("ba".into()),
        })
        .unwrap();
        let (back, _) = parse_tudataset(&exp, "ba").unwrap();
        assert_eq!(back.graphs, original.graphs);
        assert_eq!(back.labels, Some(vec![0, 1, 0]));
    }

    #[test]
    fn replay_is_byte_identical() {
        let dir = tempdir().unwrap();
        let gen = dir.path().join("gen");
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        generate(&gen, 80, 2, 3);
        let m = run(
            &Command::Obfuscate(obfuscate(&gen, &a, Mechanism::Dprr, Symmetrize::Union)),
            Exec::Parallel,
        )
        .unwrap();
        assert_eq!(m.budget.unwrap().epsilon_2, 0.9);
        let r = replay(&a.join(MANIFEST_FILE), &b).unwrap();
        assert_eq!(r.outputs, m.outputs);
        for f in &m.outputs {
            assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
        }
    }

    #[test]
    fn nonpriv_part_needs_rho() {
        let dir = tempdir().unwrap();
        generate(dir.path(), 30, 1, 3);
        let o = obfuscate(dir.path(), &dir.path().join("o"), Mechanism::NonprivPart, Symmetrize::None);
        let err = run(&Command::Obfuscate(o), Exec::default()).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn stats_nonpriv_full_passes_gates() {
        let dir = tempdir().unwrap();
        let gen = dir.path().join("gen");
        generate(&gen, 50, 1, 3);
        let o = StatsOptions {
            input: InputSpec {
                path: gen,
                format: InputFormat::Edgelist,
                name: None,
            },
            mechanism: Mechanism::NonprivFull,
            epsilon: 1.0,
            alpha: DEFAULT_ALPHA,
            rho: 0.0,
            trials: 3,
            seed: 1,
            n_max: None,
            budget_mode: BudgetMode::Nominal,
            check: true,
            gates: GateOptions::default(),
            out: dir.path().join("stats"),
        };
        let m = run(&Command::Stats(o), Exec::default()).unwrap();
        assert_eq!(m.gates_passed, Some(true));
        let csv = fs::read_to_string(dir.path().join("stats/degree_report_00000.csv")).unwrap();
        assert!(csv.starts_with("user,d,mean_d_tilde,var_d_tilde,q,d_star\n"));
        assert_eq!(csv.lines().count(), 51);
    }

    #[test]
    fn edgelist_directory_requires_files() {
        let dir = tempdir().unwrap();
        let spec = InputSpec {
            path: dir.path().to_path_buf(),
            format: InputFormat::Edgelist,
            name: None,
        };
        assert!(matches!(load_collection(&spec), Err(Error::Format { .. })));
    }
}

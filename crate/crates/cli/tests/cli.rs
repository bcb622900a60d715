use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn dprr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dprr"))
        .args(args)
        .env_remove("DPRR_SEED")
        .output()
        .expect("run dprr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generate(out: &Path, n: usize, m: usize, count: usize, seed: u64) {
    let o = dprr(&[
        "generate", "--model", "ba", "--n", &n.to_string(), "--m", &m.to_string(),
        "--count", &count.to_string(), "--seed", &seed.to_string(), "--out", p(out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

/// (n, edge count) from an edge list written by the tool.
fn edge_list_stats(path: &Path) -> (usize, usize) {
    let text = fs::read_to_string(path).unwrap();
    let n = text
        .lines()
        .find_map(|l| l.strip_prefix("# n="))
        .unwrap()
        .parse()
        .unwrap();
    (n, text.lines().filter(|l| !l.starts_with('#')).count())
}

#[test]
fn generate_ba_average_degree() {
    let dir = tempdir().unwrap();
    generate(dir.path(), 1000, 3, 1, 1);
    let (n, edges) = edge_list_stats(&dir.path().join("graph_00000.edgelist"));
    assert_eq!(n, 1000);
    let avg = 2.0 * edges as f64 / n as f64;
    assert!((avg - 6.0).abs() < 0.1, "{avg}");
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn generate_rejects_zero_m() {
    let dir = tempdir().unwrap();
    let o = dprr(&["generate", "--n", "10", "--m", "0", "--out", p(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn generate_is_reproducible() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    generate(a.path(), 200, 2, 2, 42);
    generate(b.path(), 200, 2, 2, 42);
    for f in ["graph_00000.edgelist", "graph_00001.edgelist"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn seed_defaults_from_environment() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    generate(a.path(), 100, 2, 1, 9);
    let o = Command::new(env!("CARGO_BIN_EXE_dprr"))
        .args(["generate", "--n", "100", "--m", "2", "--out", p(b.path())])
        .env("DPRR_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let f = "graph_00000.edgelist";
    assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
}

#[test]
fn obfuscate_nonpriv_full_is_identity() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    let run = dir.path().join("run");
    generate(&gen, 300, 3, 2, 3);
    let o = dprr(&["obfuscate", "--in", p(&gen), "--mechanism", "nonpriv-full", "--out", p(&run)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["graph_00000.edgelist", "graph_00001.edgelist"] {
        assert_eq!(fs::read(gen.join(f)).unwrap(), fs::read(run.join(f)).unwrap());
    }
}

#[test]
fn obfuscate_dprr_prints_budget() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    generate(&gen, 200, 3, 1, 3);
    let o = dprr(&[
        "obfuscate", "--in", p(&gen), "--mechanism", "dprr", "--epsilon", "1", "--alpha", "0.9",
        "--out", p(&dir.path().join("run")),
    ]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("epsilon_2=0.9"), "{stdout}");
    assert!(stdout.contains("effective epsilon="), "{stdout}");
}

#[test]
fn obfuscate_rr_is_dense_and_warns() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    let run = dir.path().join("run");
    let n = 3648usize;
    generate(&gen, n, 1, 1, 5);
    let o = dprr(&["obfuscate", "--in", p(&gen), "--mechanism", "rr", "--epsilon", "1", "--out", p(&run)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("dense output"));

    let (_, in_edges) = edge_list_stats(&gen.join("graph_00000.edgelist"));
    let (_, ones) = edge_list_stats(&run.join("graph_00000.edgelist"));
    // binomial expectation of the directed ones
    let q = 1.0 / (1.0f64.exp() + 1.0);
    let p_keep = 1.0 - q;
    let zeros = (n * (n - 1) - 2 * in_edges) as f64;
    let ones_in = (2 * in_edges) as f64;
    let mean = ones_in * p_keep + zeros * q;
    let sd = (ones_in * p_keep * q + zeros * q * p_keep).sqrt();
    assert!((ones as f64 - mean).abs() <= 3.0 * sd, "{ones} vs {mean} +- {sd}");
    assert!((ones as f64 / (n * (n - 1)) as f64 - 0.269).abs() < 0.001);
}

#[test]
fn obfuscate_rejects_locallap_on_directed_input() {
    let dir = tempdir().unwrap();
    let file = dir.path().join("g.edgelist");
    fs::write(&file, "# n=3\n# directed=true\n0 1\n1 2\n").unwrap();
    let o = dprr(&["obfuscate", "--in", p(&file), "--mechanism", "locallap", "--out", p(&dir.path().join("o"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn obfuscate_rejects_nonpriv_part_without_rho() {
    let dir = tempdir().unwrap();
    generate(dir.path(), 50, 2, 1, 1);
    let o = dprr(&["obfuscate", "--in", p(dir.path()), "--mechanism", "nonpriv-part", "--out", p(&dir.path().join("o"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn missing_input_is_a_data_error() {
    let dir = tempdir().unwrap();
    let o = dprr(&[
        "obfuscate", "--in", p(&dir.path().join("absent")), "--mechanism", "dprr",
        "--out", p(&dir.path().join("o")),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn stats_nonpriv_full_check_passes() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    let out = dir.path().join("stats");
    generate(&gen, 300, 3, 1, 2);
    let o = dprr(&["stats", "--in", p(&gen), "--mechanism", "nonpriv-full", "--trials", "3", "--check", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["mean_abs_error"], 0.0);
    let csv = fs::read_to_string(out.join("degree_report_00000.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("user,d,mean_d_tilde,var_d_tilde,q,d_star"));
    assert!(out.join("records.jsonl").exists());
}

fn stats_summary(gen: &Path, out: &Path, epsilon: &str) -> (i32, serde_json::Value) {
    let o = dprr(&[
        "stats", "--in", p(gen), "--mechanism", "dprr", "--epsilon", epsilon, "--trials", "200",
        "--check", "--out", p(out),
    ]);
    let summary = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    (code(&o), summary)
}

// At eps = 1 the degree noise is Lap(10). Projecting q onto [0, 1] turns
// every negative noisy degree into an empty row, so low-degree users come
// out several units too high on average and the bias gate rejects them.
#[test]
fn stats_dprr_check_on_ba_1000_at_eps_1() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    generate(&gen, 1000, 3, 1, 2);
    let (exit, summary) = stats_summary(&gen, &dir.path().join("stats"), "1");
    assert_eq!(summary["variance_violations"], 0, "{summary}");
    assert!(summary["bias_violations"].as_u64().unwrap() > 500, "{summary}");
    assert!(summary["mean_bias"].as_f64().unwrap() > 2.0, "{summary}");
    assert_eq!(exit, 4);
}

#[test]
fn stats_dprr_check_passes_with_tight_degree_noise() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    generate(&gen, 1000, 3, 1, 2);
    let (exit, summary) = stats_summary(&gen, &dir.path().join("stats"), "10");
    assert_eq!(summary["bias_violations"], 0, "{summary}");
    assert_eq!(summary["variance_violations"], 0, "{summary}");
    assert_eq!(exit, 0);
}

#[test]
fn stats_failed_gate_exits_4() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    generate(&gen, 300, 3, 1, 2);
    let o = dprr(&[
        "stats", "--in", p(&gen), "--mechanism", "rr", "--trials", "5", "--check",
        "--out", p(&dir.path().join("stats")),
    ]);
    assert_eq!(code(&o), 4);
}

#[test]
fn stats_rejects_zero_trials() {
    let dir = tempdir().unwrap();
    generate(dir.path(), 50, 2, 1, 1);
    let o = dprr(&["stats", "--in", p(dir.path()), "--mechanism", "dprr", "--trials", "0", "--out", p(&dir.path().join("s"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bench_sizes_and_subsample() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("bench");
    let o = dprr(&["bench", "--sizes", "200,400", "--m", "3", "--mechanisms", "dprr,rr", "--trials", "2", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("scaling.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    let gen = dir.path().join("gen");
    generate(&gen, 400, 3, 1, 1);
    let o = dprr(&[
        "bench", "--gamma-list", "0.5,1", "--in", p(&gen), "--mechanisms", "dprr", "--trials", "1",
        "--out", p(&dir.path().join("sub")),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("sub/scaling.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with("dprr,1,400,"), "{last}");
}

#[test]
fn bench_rejects_unsorted_sizes() {
    let dir = tempdir().unwrap();
    let o = dprr(&["bench", "--sizes", "400,200", "--out", p(dir.path())]);
    assert_eq!(code(&o), 2);
}

fn tu_edges(dir: &Path, name: &str) -> Vec<String> {
    let mut lines: Vec<String> = fs::read_to_string(dir.join(format!("{name}_A.txt")))
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect();
    lines.sort();
    lines
}

#[test]
fn export_round_trips_and_symmetrizes() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    generate(&gen, 150, 2, 3, 4);
    fs::write(gen.join("labels.txt"), "0\n1\n1\n").unwrap();

    // nonpriv-full export equals a direct export of the input
    let full = dir.path().join("full");
    assert_eq!(code(&dprr(&["obfuscate", "--in", p(&gen), "--mechanism", "nonpriv-full", "--out", p(&full)])), 0);
    let exp_full = dir.path().join("exp_full");
    assert_eq!(code(&dprr(&["export", "--in", p(&full), "--format", "tudataset", "--name", "ds", "--out", p(&exp_full)])), 0);
    let again = dir.path().join("again");
    assert_eq!(code(&dprr(&["obfuscate", "--in", p(&exp_full), "--name", "ds", "--mechanism", "nonpriv-full", "--out", p(&again)])), 0);
    let exp_again = dir.path().join("exp_again");
    assert_eq!(code(&dprr(&["export", "--in", p(&again), "--out", p(&exp_again)])), 0);
    for suffix in ["A", "graph_indicator", "graph_labels"] {
        let f = format!("ds_{suffix}.txt");
        assert_eq!(fs::read(exp_full.join(&f)).unwrap(), fs::read(exp_again.join(&f)).unwrap(), "{f}");
    }

    // union-symmetrized DPRR output is symmetric on disk
    let run = dir.path().join("dprr");
    assert_eq!(code(&dprr(&["obfuscate", "--in", p(&gen), "--mechanism", "dprr", "--symmetrize", "union", "--out", p(&run)])), 0);
    let exp = dir.path().join("exp");
    let o = dprr(&["export", "--in", p(&run), "--out", p(&exp), "--name", "ds"]);
    assert_eq!(code(&o), 0);
    let edges = tu_edges(&exp, "ds");
    let mut reversed: Vec<String> = edges
        .iter()
        .map(|l| {
            let (a, b) = l.split_once(", ").unwrap();
            format!("{b}, {a}")
        })
        .collect();
    reversed.sort();
    assert_eq!(edges, reversed);

    // directed runs export the union view with a warning
    let directed = dir.path().join("directed");
    assert_eq!(code(&dprr(&["obfuscate", "--in", p(&gen), "--mechanism", "dprr", "--out", p(&directed)])), 0);
    let o = dprr(&["export", "--in", p(&directed), "--out", p(&dir.path().join("exp_dir"))]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("union"));
}

#[test]
fn export_rejects_label_mismatch() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    let run = dir.path().join("run");
    generate(&gen, 50, 2, 2, 4);
    assert_eq!(code(&dprr(&["obfuscate", "--in", p(&gen), "--mechanism", "nonpriv-full", "--out", p(&run)])), 0);
    fs::write(run.join("labels.txt"), "0\n").unwrap();
    let o = dprr(&["export", "--in", p(&run), "--out", p(&dir.path().join("exp"))]);
    assert_eq!(code(&o), 3);
}

#[test]
fn replay_reproduces_outputs() {
    let dir = tempdir().unwrap();
    let gen = dir.path().join("gen");
    let run = dir.path().join("run");
    let replayed = dir.path().join("replayed");
    generate(&gen, 200, 3, 2, 4);
    assert_eq!(
        code(&dprr(&["obfuscate", "--in", p(&gen), "--mechanism", "locallap", "--rho", "0.3", "--out", p(&run)])),
        0
    );
    let o = dprr(&["replay", "--manifest", p(&run.join("manifest.json")), "--out", p(&replayed)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    for f in manifest["outputs"].as_array().unwrap() {
        let f = f.as_str().unwrap();
        assert_eq!(fs::read(run.join(f)).unwrap(), fs::read(replayed.join(f)).unwrap(), "{f}");
    }
}

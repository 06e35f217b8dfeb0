use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lanky(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lanky"))
        .args(args)
        .env("LANKY_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}\nstdout: {}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn grid_pipeline_writes_files_and_passes_checks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&lanky(d, &["generate", "--family", "grid", "--k", "5"]));
    let inst = d.join("instance.json");
    assert!(inst.exists());

    let out = ok(&lanky(d, &["spanner", "--input", p(&inst), "--eps", "0.5"]));
    let info: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(info["edges"], 40);
    let graph = d.join("spanner.json");

    ok(&lanky(
        d,
        &["separator", "--input", p(&inst), "--graph", p(&graph), "--seed", "7"],
    ));
    let sep = d.join("separator.json");
    let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sep).unwrap()).unwrap();
    for key in ["center", "r", "r_star", "sigma", "separator", "components"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }

    let out = ok(&lanky(
        d,
        &[
            "verify",
            "--input",
            p(&inst),
            "--graph",
            p(&graph),
            "--checks",
            "stretch,greedy-edge,mst,separator",
            "--separator",
            p(&sep),
        ],
    ));
    assert_eq!(out.lines().count(), 4);
    assert!(d.join("checks.jsonl").exists());
}

#[test]
fn verify_fails_on_a_path_that_is_not_a_spanner() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let inst = d.join("square.csv");
    fs::write(&inst, "0,0\n1,0\n1,1\n0,1\n").unwrap();
    let graph = d.join("path.csv");
    fs::write(&graph, "u,v,w\n0,1,1\n1,2,1\n2,3,1\n").unwrap();
    let out = lanky(d, &["verify", "--input", p(&inst), "--graph", p(&graph)]);
    assert_eq!(out.status.code(), Some(1));
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.contains("\"passed\":false"));
}

#[test]
fn csv_and_matrix_formats() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&lanky(
        d,
        &["generate", "--family", "uniform", "--n", "30", "--seed", "2", "--as-matrix"],
    ));
    let inst = d.join("instance.csv");
    let rows = fs::read_to_string(&inst).unwrap();
    assert_eq!(rows.lines().count(), 30);

    ok(&lanky(
        d,
        &["spanner", "--input", p(&inst), "--matrix", "--algorithm", "cgmz", "--format", "csv"],
    ));
    assert!(d.join("spanner.csv").exists());
    assert!(d.join("reroutes.json").exists());
    ok(&lanky(
        d,
        &["verify", "--input", p(&inst), "--matrix", "--graph", p(&d.join("spanner.csv")), "--t", "3"],
    ));
}

#[test]
fn unit_ball_instances_keep_mu() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&lanky(
        d,
        &["generate", "--family", "ubg", "--n", "60", "--mu", "0.6", "--seed", "1"],
    ));
    let inst = d.join("instance.json");
    ok(&lanky(d, &["spanner", "--input", p(&inst)]));
    ok(&lanky(
        d,
        &["verify", "--input", p(&inst), "--graph", p(&d.join("spanner.json")), "--checks", "stretch,greedy-edge"],
    ));
}

#[test]
fn run_and_scaling_from_spec() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let spec = d.join("spec.json");
    fs::write(
        &spec,
        r#"{"generator":{"type":"Grid","k":6,"d":2},"algorithm":"greedy","eps":0.5,"checks":["lankiness","mst"]}"#,
    )
    .unwrap();
    let run_dir = d.join("run");
    let out = ok(&lanky(d, &["run", "--spec", p(&spec), "--out", p(&run_dir)]));
    assert!(out.starts_with("n,edges,max_degree"));
    for f in ["spanner.json", "separator.json", "checks.jsonl", "summary.csv"] {
        assert!(run_dir.join(f).exists(), "missing {f}");
    }

    let sc_dir = d.join("scaling");
    let out = ok(&lanky(
        d,
        &["scaling", "--spec", p(&spec), "--sizes", "16,36,64", "--out", p(&sc_dir)],
    ));
    assert!(out.contains("slope,"));
    assert!(sc_dir.join("scaling.csv").exists());
    assert!(sc_dir.join("fit.json").exists());
}

#[test]
fn decompose_writes_tree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&lanky(d, &["generate", "--family", "grid", "--k", "6"]));
    let inst = d.join("instance.json");
    ok(&lanky(d, &["spanner", "--input", p(&inst)]));
    let out = ok(&lanky(
        d,
        &["decompose", "--input", p(&inst), "--graph", p(&d.join("spanner.json")), "--leaf-size", "4"],
    ));
    assert!(out.contains("\"depth\""));
    assert!(d.join("decomposition.json").exists());
}

#[test]
fn bad_input_exits_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = lanky(d, &["spanner", "--input", p(&d.join("missing.csv"))]);
    assert_eq!(out.status.code(), Some(2));
    let out = lanky(d, &["generate", "--family", "grid", "--k", "3", "--eps"]);
    assert!(!out.status.success());
}

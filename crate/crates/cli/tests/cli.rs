use std::path::Path;
use std::process::{Command, Output};

use anglelab::content::DyadicGrid;
use anglelab::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn anglelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anglelab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn gasket_depth_one_has_nine_points() {
    let o = anglelab(&["gasket", "--n", "2", "--delta", "0.25", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let cloud = PointCloud::from_json(&stdout(&o)).unwrap();
    assert_eq!(cloud.len(), 9);
    assert_eq!(cloud.dimension(), 2);
}

#[test]
fn certify_exit_codes() {
    let o = anglelab(&["certify", "--n", "3", "--delta", "0.005", "--alpha", "30", "--window", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "certificate");
    assert_eq!(v["report"]["decision"], "certified-avoided");
    assert!((v["metric"].as_f64().unwrap() - 22.84).abs() < 0.01);

    let o = anglelab(&["certify", "--n", "3", "--delta", "0.005", "--alpha", "60", "--window", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["decision"], "not-certified");
    assert_eq!(v["report"]["blocking_angle"], 60.0);

    let o = anglelab(&["certify", "--n", "3", "--delta", "0.7", "--alpha", "30", "--window", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_input_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "two.json", r#"{"dimension":2,"points":[[0,0],[1,1]]}"#);
    assert_eq!(anglelab(&["spectrum", "-i", &two]).status.code(), Some(2));
    assert_eq!(anglelab(&["spectrum", "-i", "/nonexistent.json"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(anglelab(&["minkdim", "-i", &bad]).status.code(), Some(2));
    assert_eq!(anglelab(&["frobnicate"]).status.code(), Some(2));

    let o = anglelab(&["gasket", "--n", "3", "--delta", "0.2", "--depth", "20"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let o = anglelab(&["gasket", "--n", "2", "--delta", "0.2", "--depth", "6", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn spectrum_budget_and_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let g = g.to_str().unwrap();
    assert_eq!(anglelab(&["gasket", "--n", "2", "--delta", "0.25", "--depth", "2", "-o", g]).status.code(), Some(0));
    assert_eq!(anglelab(&["spectrum", "-i", g, "--budget", "100"]).status.code(), Some(3));

    let o = anglelab(&["spectrum", "-i", g, "--budget", "100", "--sample", "--seed", "4", "--bin", "45"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["triples"], 100);
    assert_eq!(v["report"]["exhaustive"], false);
    assert_eq!(v["report"]["histogram"]["counts"].as_array().unwrap().len(), 4);

    // 27 points, every angle recorded once
    let o = anglelab(&["spectrum", "-i", g]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["triples"], 27 * 26 * 25 / 2);
}

#[test]
fn spectrum_window_hit_and_miss() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(dir.path(), "sq.csv", "0,0\n1,0\n0,1\n1,1\n");
    let o = anglelab(&["spectrum", "-i", &square, "--alpha", "90", "--window", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["hit"]["indices"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["metric"], 90.0);
    // a square has only 45 and 90 degree angles
    let o = anglelab(&["spectrum", "-i", &square, "--alpha", "60", "--window", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cloud_round_trips_through_files() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pts: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.random::<f64>() * 1e3, rng.random::<f64>() - 0.5, rng.random()]).collect();
    let cloud = PointCloud::from_coords(3, pts).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let json = write(dir.path(), "c.json", &cloud.to_json());
    let csv = write(dir.path(), "c.csv", &cloud.to_csv());
    assert_eq!(PointCloud::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap(), cloud);
    assert_eq!(PointCloud::from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap(), cloud);

    // the same cloud through either format gives the same report
    let a = anglelab(&["extreme", "-i", &json, "--target", "straight"]);
    let b = anglelab(&["extreme", "-i", &csv, "--target", "straight"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn rasterize_then_content_and_zoom() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "p.csv", "0.1,0.1\n0.9,0.9\n0.6,0.1\n");
    let grid = dir.path().join("grid.json");
    let grid = grid.to_str().unwrap();
    assert_eq!(anglelab(&["rasterize", "-i", &pts, "--m", "1", "-o", grid]).status.code(), Some(0));
    let g = DyadicGrid::from_json(&std::fs::read_to_string(grid).unwrap()).unwrap();
    assert_eq!(g.len(), 3);

    let o = anglelab(&["content", "--grid", grid, "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["metric"], 0.75);

    let o = anglelab(&["content", "--grid", grid, "--s", "1", "--format", "csv"]);
    assert!(stdout(&o).contains("value,1.0\n"), "{}", stdout(&o));

    assert_eq!(anglelab(&["zoom", "--grid", grid, "--s", "1", "--delta", "0.6"]).status.code(), Some(2));
    assert_eq!(anglelab(&["content", "--grid", grid, "--s", "1", "--format", "svg"]).status.code(), Some(2));

    let far = write(dir.path(), "far.csv", "0.5,3\n");
    assert_eq!(anglelab(&["rasterize", "-i", &far, "--m", "2"]).status.code(), Some(2));
    assert_eq!(anglelab(&["rasterize", "-i", &far, "--m", "2", "--normalize"]).status.code(), Some(0));
}

#[test]
fn svg_needs_two_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let planar = write(dir.path(), "p.csv", "0,0\n1,0\n0.5,0.8\n");
    let o = anglelab(&["triangle", "-i", &planar, "--delta", "0.3", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("<svg") && text.contains("<polygon"));
    assert_eq!(text.matches(r#"r="4""#).count(), 3);

    let o = anglelab(&["gasket", "--n", "3", "--delta", "0.2", "--depth", "1", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = anglelab(&["gasket", "--n", "3", "--delta", "0.2", "--depth", "1", "--format", "svg", "--project", "0,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches(r#"r="1.5""#).count(), 16);
    let o = anglelab(&["gasket", "--n", "3", "--delta", "0.2", "--depth", "1", "--format", "svg", "--project", "0,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rectangle_from_ifs_file() {
    let dir = tempfile::tempdir().unwrap();
    let ifs = write(
        dir.path(),
        "ifs.json",
        r#"{"dimension":2,"maps":[{"center":[0,0],"ratio":0.3},{"center":[1,0],"ratio":0.3},{"center":[0,1],"ratio":0.3}]}"#,
    );
    let o = anglelab(&["rectangle", "--ifs", &ifs, "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert_eq!(v["params"]["ifs"]["maps"][1]["ratio"], 0.3);

    assert_eq!(anglelab(&["rectangle", "--depth", "4"]).status.code(), Some(2));
    assert_eq!(anglelab(&["rectangle", "--n", "2", "--delta", "0.45", "--f", "1", "--g", "1", "--depth", "3"]).status.code(), Some(2));
}

#[test]
fn output_file_and_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = Command::new(env!("CARGO_BIN_EXE_anglelab"))
        .args(["gasket", "--n", "2", "--delta", "0.3", "--depth", "3", "-o", out.to_str().unwrap()])
        .env("ANGLELAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let single = std::fs::read_to_string(&out).unwrap();
    let many = stdout(&anglelab(&["gasket", "--n", "2", "--delta", "0.3", "--depth", "3"]));
    assert_eq!(single, many);
}

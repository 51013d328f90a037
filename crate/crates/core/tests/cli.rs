mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jetpart::generate;
use jetpart::io::{load_graph, read_partition, write_metis, Format};

use common::*;

fn jetpart(args: &[&str], graph: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetpart"))
        .arg(graph)
        .args(args)
        .output()
        .expect("run jetpart")
}

fn write_grid(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("grid.graph");
    write_metis(&generate::grid2d(20, 15), fs::File::create(&path).unwrap()).unwrap();
    path
}

#[test]
fn writes_partition_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_grid(dir.path());
    let metrics = dir.path().join("m.json");
    let out = jetpart(
        &["--k", "4", "--seed", "3", "--metrics", metrics.to_str().unwrap()],
        &graph,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let g = load_graph(&graph, Format::Metis).unwrap();
    let parts = read_partition(fs::File::open(dir.path().join("grid.graph.part.4")).unwrap()).unwrap();
    assert_eq!(parts.len(), g.n());
    assert!(naive_balanced(&g, &parts, 4, 0.03));

    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(m["cutsize"].as_i64().unwrap(), naive_cut(&g, &parts));
    assert_eq!(m["seed"], 3);
    assert_eq!(m["config"]["k"], 4);
    assert_eq!(m["config"]["phi"], 0.999);
    // max part weight over W / k
    assert!(m["imbalance"].as_f64().unwrap() <= 1.03 + 1e-12);
    let levels = m["iterations_per_level"].as_array().unwrap();
    assert_eq!(levels.len(), m["levels"].as_array().unwrap().len());
    for phase in ["coarsen", "initial_partition", "refine", "total"] {
        assert!(m["phase_seconds"][phase].as_f64().unwrap() >= 0.0, "{phase}");
    }
}

#[test]
fn matrix_market_is_detected_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.mtx");
    let mut body = String::from("%%MatrixMarket matrix coordinate real general\n12 12 12\n");
    for v in 0..12 {
        body.push_str(&format!("{} {} 2.5\n", v + 1, (v + 1) % 12 + 1));
    }
    fs::write(&path, body).unwrap();
    let part = dir.path().join("c.part");
    let out = jetpart(
        &["--k", "2", "--imbalance", "0", "--out", part.to_str().unwrap()],
        &path,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let parts = read_partition(fs::File::open(&part).unwrap()).unwrap();
    // a 12-cycle splits into two arcs of six
    assert_eq!(naive_cut(&generate::cycle(12), &parts), 2);
}

#[test]
fn io_and_parse_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        jetpart(&["--k", "2"], &dir.path().join("missing.graph")).status.code(),
        Some(1)
    );

    let bad = dir.path().join("bad.graph");
    fs::write(&bad, "3 2\n2\n1 x\n2\n").unwrap();
    let out = jetpart(&["--k", "2"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let graph = write_grid(dir.path());
    assert_eq!(jetpart(&["--k", "two"], &graph).status.code(), Some(1));
    assert_eq!(jetpart(&["--k", "1000"], &graph).status.code(), Some(1));
}

#[test]
fn infeasible_balance_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // vertex 1 weighs 10 of a total 13, more than half
    let heavy = dir.path().join("heavy.graph");
    fs::write(&heavy, "4 3 10\n10 2\n1 1 3\n1 2 4\n1 3\n").unwrap();
    assert_eq!(jetpart(&["--k", "2"], &heavy).status.code(), Some(2));

    // seven unit vertices cannot be split into two parts of at most three
    let path7 = dir.path().join("p7.graph");
    write_metis(&generate::path(7), fs::File::create(&path7).unwrap()).unwrap();
    assert_eq!(
        jetpart(&["--k", "2", "--imbalance", "0"], &path7).status.code(),
        Some(2)
    );
}

#[test]
fn single_part_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_grid(dir.path());
    let part = dir.path().join("one.part");
    let out = jetpart(&["--k", "1", "--out", part.to_str().unwrap()], &graph);
    assert!(out.status.success());
    let parts = read_partition(fs::File::open(&part).unwrap()).unwrap();
    assert!(parts.iter().all(|&p| p == 0));
}

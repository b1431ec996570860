use std::path::PathBuf;
use std::process::{Command, Output};

use cluster_angles::fixtures;
use cluster_angles::lpoly::LPoly;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-angles"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_prints_golden_plain_arc() {
    let s = fixture("square_surface.json");
    let a = fixture("square_plain_arc.json");
    let o = run(&["expand", "--surface", &s, "--arc", &a]);
    assert_eq!(o.status.code(), Some(0));
    let printed = LPoly::parse(10, stdout(&o).trim()).unwrap();
    assert_eq!(printed, fixtures::golden("plain_arc_principal"));
    assert_eq!(
        stdout(&o).trim(),
        fixtures::golden("plain_arc_principal").to_string()
    );
}

#[test]
fn coefficient_free_flag() {
    let s = fixture("square_surface.json");
    let a = fixture("square_notched_arc.json");
    let o = run(&["expand", "--surface", &s, "--arc", &a, "--coefficient-free"]);
    assert_eq!(
        stdout(&o).trim(),
        fixtures::golden("notched_arc_free").to_string()
    );
}

#[test]
fn verify_all_backends_on_notched_arc() {
    let s = fixture("square_surface.json");
    let a = fixture("square_notched_arc.json");
    let o = run(&["verify", "--surface", &s, "--arc", &a, "--all-backends"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "4 backends, 9 objects each, all weights equal\n"
    );
}

#[test]
fn enumerate_without_diagonals_is_usage_error() {
    let s = fixture("twice_punctured_monogon.json");
    let a = fixture("monogon_doubly_notched.json");
    assert_eq!(
        run(&["enumerate", "--surface", &s, "--arc", &a])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    let s = fixture("square_surface.json");
    assert_eq!(
        run(&["expand", "--surface", "/no/such/file", "--arc", "x"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["expand", "--surface", &s]).status.code(), Some(2));
    let a = fixture("square_plain_arc.json");
    assert_eq!(
        run(&["expand", "--surface", &s, "--arc", &a, "--backend", "none"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn identical_runs_are_byte_identical() {
    let s = fixture("square_surface.json");
    let a = fixture("square_doubly_notched_arc.json");
    let first = run(&["enumerate", "--surface", &s, "--arc", &a, "--backend", "qp"]);
    let second = run(&["enumerate", "--surface", &s, "--arc", &a, "--backend", "qp"]);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).starts_with("18 objects (qp)\n"));
}

#[test]
fn json_report_and_polygon_dump() {
    let dir = std::env::temp_dir().join(format!("cluster-angles-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let poly = dir.join("polygon.json");
    let s = fixture("square_surface.json");
    let a = fixture("square_notched_arc.json");
    let o = run(&[
        "expand",
        "--surface",
        &s,
        "--arc",
        &a,
        "--json-out",
        report.to_str().unwrap(),
        "--dump-polygon",
        poly.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["count"], 9);
    assert_eq!(v["backend"], "angles");
    let p: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&poly).unwrap()).unwrap();
    assert_eq!(p["triangles"].as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn loop_element_from_band_graph() {
    let s = fixture("annulus.json");
    let z = fixture("annulus_loop.json");
    let angles = run(&["expand", "--surface", &s, "--loop", &z]);
    let band = run(&[
        "expand",
        "--surface",
        &s,
        "--loop",
        &z,
        "--backend",
        "snake",
    ]);
    assert_eq!(angles.status.code(), Some(0));
    assert_eq!(angles.stdout, band.stdout);
    let bad = run(&["expand", "--surface", &s, "--loop", &z, "--backend", "qp"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn oracle_commands() {
    let h = fixture("hexagon_fan.json");
    let o = run(&["oracle", "closure", "--surface", &h]);
    assert!(stdout(&o).starts_with("9 cluster variables, 14 clusters, complete\n"));
    let o = run(&["oracle", "verify", "--surface", &h]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "6 arcs, 6 in a closure of 9 variables\n");
}

#[test]
fn random_verification_is_seeded() {
    let a = run(&["verify", "--random", "5", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), "5 random arcs (seed 11), all weights equal\n");
}

#[test]
fn fvector_matches_intersections() {
    let s = fixture("square_surface.json");
    let a = fixture("square_plain_arc.json");
    let o = run(&["fvector", "--surface", &s, "--arc", &a]);
    assert_eq!(o.status.code(), Some(0));
}

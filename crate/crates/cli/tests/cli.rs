use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn eptopo(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eptopo"))
        .current_dir(dir)
        .args(["--out", "out"])
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("dirac.json", r#"{"model": "nh_dirac", "b_x": 1.0}"#),
        ("sqrt.json", r#"{"model": "square_root", "z1": [0, -1], "z2": [0, 1]}"#),
        ("cw.json", r#"{"kind": "circle", "center": [0, 0], "radius": 3, "orientation": "cw"}"#),
        ("ccw.json", r#"{"kind": "circle", "center": [0, 0], "radius": 3, "orientation": "ccw"}"#),
        ("small.json", r#"{"kind": "circle", "center": [3, 3], "radius": 0.5}"#),
        ("hits_ep.json", r#"{"kind": "circle", "center": [1, -1], "radius": 1}"#),
        ("bad.json", "{not json"),
    ];
    for (name, body) in files {
        fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

fn read_json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out").join(name)).unwrap()).unwrap()
}

#[test]
fn find_eps_exit_codes() {
    let dir = setup();
    let ok = eptopo(dir.path(), &["--model", "dirac.json", "find-eps"]);
    assert_eq!(code(&ok), 0);
    let doc = read_json(dir.path(), "eps.json");
    let eps = doc["eps"].as_array().unwrap();
    assert_eq!(eps.len(), 2);
    assert_eq!(eps[0]["y"].as_f64().unwrap(), -1.0);
    assert_eq!(eps[1]["y"].as_f64().unwrap(), 1.0);

    assert_eq!(code(&eptopo(dir.path(), &["--model", "dirac.json", "find-eps", "--region", "5,6,5,6"])), 3);
    assert_eq!(code(&eptopo(dir.path(), &["--model", "dirac.json", "find-eps", "--region", "1,1,0,2"])), 3);
    assert_eq!(code(&eptopo(dir.path(), &["--model", "bad.json", "find-eps"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["--model", "missing.json", "find-eps"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["find-eps"])), 2);
}

#[test]
fn trace_classes() {
    let dir = setup();
    let cases = [
        ("cw.json", "ab", "CW(1)", 1.0),
        ("ccw.json", "BA", "CCW(1)", -1.0),
        ("small.json", "e", "Trivial", 0.0),
    ];
    for (lp, word, class, nu) in cases {
        let o = eptopo(dir.path(), &["--model", "sqrt.json", "--loop", lp, "trace", "--csv"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let doc = read_json(dir.path(), "trace.json");
        assert_eq!(doc["word"], word);
        assert_eq!(doc["class"], class);
        assert_eq!(doc["vorticity"].as_f64().unwrap(), nu);
        assert_eq!(doc["word_vorticity"].as_f64().unwrap(), nu);
        assert_eq!(doc["permutation"], "identity");
    }
    let csv = fs::read_to_string(dir.path().join("out/trace.csv")).unwrap();
    assert!(csv.starts_with("t,re_Eplus,im_Eplus,re_Eminus,im_Eminus,re_D,im_D\n"));
}

#[test]
fn dirac_trace_reports_charge_weighted_vorticity() {
    let dir = setup();
    let o = eptopo(dir.path(), &["--model", "dirac.json", "--loop", "cw.json", "trace"]);
    assert_eq!(code(&o), 0);
    let doc = read_json(dir.path(), "trace.json");
    assert_eq!(doc["word"], "ab");
    assert_eq!(doc["class"], "CW(1)");
    assert_eq!(doc["vorticity"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["charged_vorticity"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["word_vorticity"].as_f64().unwrap(), 1.0);
}

#[test]
fn trace_failures() {
    let dir = setup();
    let o = eptopo(dir.path(), &["--model", "sqrt.json", "--loop", "hits_ep.json", "trace"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&eptopo(dir.path(), &["--model", "sqrt.json", "--loop", "bad.json", "trace"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["--model", "sqrt.json", "trace"])), 2);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = setup();
    let run = |args: &[&str], file: &str| {
        assert_eq!(code(&eptopo(dir.path(), args)), 0);
        fs::read(dir.path().join("out").join(file)).unwrap()
    };
    let trace = ["--model", "sqrt.json", "--loop", "cw.json", "trace"];
    assert_eq!(run(&trace, "trace.json"), run(&trace, "trace.json"));
    let verify = ["--seed", "3", "verify"];
    let cfg = dir.path().join("quick.json");
    fs::write(&cfg, r#"{"sphere_points": 200, "rewrite_words": 200, "random_loops": 5}"#).unwrap();
    let verify_cfg = [&verify[..], &["--config", "quick.json"]].concat();
    assert_eq!(run(&verify_cfg, "certificates.json"), run(&verify_cfg, "certificates.json"));
}

#[test]
fn verify_config_errors() {
    let dir = setup();
    fs::write(dir.path().join("typo.json"), r#"{"sphere_pionts": 10}"#).unwrap();
    assert_eq!(code(&eptopo(dir.path(), &["verify", "--config", "typo.json"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["verify", "--config", "bad.json"])), 2);
    fs::write(dir.path().join("small.json"), r#"{"homotopy_grid": [64, 64]}"#).unwrap();
    assert_eq!(code(&eptopo(dir.path(), &["verify", "--config", "small.json"])), 2);
}

#[test]
fn verify_default_passes() {
    let dir = setup();
    let o = eptopo(dir.path(), &["verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let doc = read_json(dir.path(), "certificates.json");
    assert_eq!(doc["all_pass"], true);
    let h = &doc["certificates"]["homotopy"]["grid"];
    assert_eq!(h["nt"], 256);
    assert!(h["min_puncture_distance"].as_f64().unwrap() > 0.0);
}

#[test]
fn table_command() {
    let dir = setup();
    assert_eq!(code(&eptopo(dir.path(), &["table", "1", "--words"])), 0);
    let csv = fs::read_to_string(dir.path().join("out/table_1.csv")).unwrap();
    assert_eq!(csv, "r,count,linking,vorticity\n0,1,1,1\n1,2,2,0\n2,1,3,-1\n");
    let words = fs::read_to_string(dir.path().join("out/table_1_words.csv")).unwrap();
    assert_eq!(words.lines().count(), 5);
    assert_eq!(code(&eptopo(dir.path(), &["table", "0"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["table", "13"])), 2);
}

#[test]
fn surface_command() {
    let dir = setup();
    let o = eptopo(dir.path(), &["--model", "sqrt.json", "surface", "--grid", "41x31"]);
    assert_eq!(code(&o), 0);
    let re = fs::read_to_string(dir.path().join("out/surface_re.csv")).unwrap();
    assert_eq!(re.lines().count(), 1 + 41 * 31);
    let doc = read_json(dir.path(), "surface.json");
    let xs = doc["intersections"].as_array().unwrap();
    assert_eq!(xs.len(), 2);
    assert!((xs[0]["y"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert_eq!(code(&eptopo(dir.path(), &["--model", "dirac.json", "surface", "--grid", "1x201"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["--model", "dirac.json", "surface", "--grid", "0"])), 2);
}

#[test]
fn lift_command() {
    let dir = setup();
    assert_eq!(code(&eptopo(dir.path(), &["lift", "ba"])), 0);
    let doc = read_json(dir.path(), "lift.json");
    assert_eq!(doc["closes"], true);
    assert_eq!(doc["rewrite"], "B C^-1 A");
    assert_eq!(code(&eptopo(dir.path(), &["lift", "a"])), 0);
    assert_eq!(read_json(dir.path(), "lift.json")["order_to_close"], 2);

    fs::write(
        dir.path().join("three.json"),
        r#"{"sheets": 3, "branch_points": [{"pos": [0, 0], "cut_dir": [0, 1], "perm": [1, 2, 0]}]}"#,
    )
    .unwrap();
    assert_eq!(code(&eptopo(dir.path(), &["lift", "a", "--cover", "three.json"])), 0);
    let doc = read_json(dir.path(), "lift.json");
    assert_eq!(doc["order_to_close"], 3);
    assert!(doc.get("rewrite").is_none());
    assert_eq!(code(&eptopo(dir.path(), &["lift", "b", "--cover", "three.json"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["lift", "xyz"])), 2);
}

#[test]
fn project_command() {
    let dir = setup();
    let o = eptopo(dir.path(), &["project", "--point", "0,0,-1", "--point", "0,0,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "n,chi\n0,0\ninf,inf\n");
    fs::write(dir.path().join("plane.csv"), "n,chi\n2.6257,0.6001\n0,0\n").unwrap();
    let o = eptopo(dir.path(), &["project", "--inverse", "--input", "plane.csv"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("out/unprojected.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "nt,chit,xit");
    assert_eq!(rows[2], "0,0,-1");
    assert!(rows[1].starts_with("0.636"));
    assert_eq!(code(&eptopo(dir.path(), &["project", "--point", "1,1,1"])), 2);
    assert_eq!(code(&eptopo(dir.path(), &["project"])), 2);
}

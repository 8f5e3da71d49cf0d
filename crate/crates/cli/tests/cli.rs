use std::path::{Path, PathBuf};

use assert_cmd::Command;
use serde_json::Value;
use tempfile::TempDir;

fn gbs() -> Command {
    Command::cargo_bin("gbs").unwrap()
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    gbs().args(["examples", "--dir"]).arg(dir.path()).assert().success();
    // The map file embeds its domain as a gbs-graph.v1 document.
    let map: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("traintrack-ex.json")).unwrap()).unwrap();
    std::fs::write(dir.path().join("t.json"), map["graph"].to_string()).unwrap();
    dir
}

fn path(d: &TempDir, name: &str) -> PathBuf {
    d.path().join(name)
}

fn report(cmd: &mut Command) -> Value {
    let out = cmd.assert().success().get_output().stdout.clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["schema"], "report.v1");
    v
}

#[test]
fn examples_are_readable() {
    let d = setup();
    for name in ["bs24.json", "rose3.json"] {
        let s = std::fs::read_to_string(path(&d, name)).unwrap();
        assert!(gbs_core::json::parse_graph(&s).is_ok());
    }
    for name in ["traintrack-ex.json", "traintrack-inverse.json"] {
        let s = std::fs::read_to_string(path(&d, name)).unwrap();
        assert!(gbs_core::json::parse_map(&s).is_ok());
    }
}

#[test]
fn bundled_maps_are_train_tracks() {
    let d = setup();
    for name in ["traintrack-ex.json", "traintrack-inverse.json"] {
        let v = report(gbs().args(["tt", "check"]).arg(path(&d, name)));
        assert_eq!(v["data"]["verdict"], "train track", "{v}");
    }
}

#[test]
fn word_reduce_uses_the_relation() {
    let d = setup();
    let v = report(gbs().args(["word", "reduce", "--graph"]).arg(path(&d, "bs24.json")).args(["t", "a^2", "T"]));
    assert_eq!(v["data"]["reduced"], serde_json::json!(["a^4"]));
}

#[test]
fn distance_to_self_is_zero() {
    let d = setup();
    let v = report(gbs().arg("dist").arg(path(&d, "bs24.json")).arg(path(&d, "bs24.json")));
    assert_eq!(v["data"]["d_lip"].as_f64().unwrap(), 0.0);
}

#[test]
fn random_move_then_distance() {
    let d = setup();
    let x = path(&d, "x.json");
    gbs().args(["move", "random", "--steps", "4", "--seed", "3"]).arg(path(&d, "t.json")).arg("-o").arg(&x).assert().success();
    let v = report(gbs().arg("dist").arg(path(&d, "t.json")).arg(&x).args(["--sup-samples", "100"]));
    assert!(v["data"]["d_lip"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn normalize_round_trips() {
    let d = setup();
    let out = path(&d, "n.json");
    gbs().args(["graph", "normalize"]).arg(path(&d, "bs24.json")).arg("-o").arg(&out).assert().success();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(path(&d, "bs24.json")).unwrap());
}

#[test]
fn lamination_cache_is_reused() {
    let d = setup();
    let cache = path(&d, "cache");
    let run = || {
        report(
            gbs().args(["lam", "ratio", "--l", "1", "--k-max", "5", "--cache"])
                .arg(&cache)
                .arg(path(&d, "traintrack-ex.json"))
                .args(["r", "s", "t"]),
        )
    };
    let a = run();
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    assert_eq!(run(), a);
    let r = a["data"]["ratio"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&r));
}

#[test]
fn whitehead_dot() {
    let d = setup();
    let out = gbs().args(["wh", "graph", "--map"]).arg(path(&d, "traintrack-ex.json")).args(["--vertex", "x", "--dot"]).assert().success();
    let s = String::from_utf8(out.get_output().stdout.clone()).unwrap();
    assert!(s.starts_with("graph \"Wh_x\" {"));
}

#[test]
fn axis_projects_the_tree_to_step_zero() {
    let d = setup();
    let v = report(gbs().args(["axis", "project"]).arg(path(&d, "t.json")));
    assert_eq!(v["data"]["n_x"], 0);
}

#[test]
fn exit_codes() {
    let d = setup();
    gbs().arg("frobnicate").assert().code(2);
    gbs().args(["dist", "only-one.json"]).assert().code(2);
    let out = gbs().args(["graph", "validate"]).arg(path(&d, "traintrack-ex.json")).assert().code(1);
    let err: Value = serde_json::from_slice(&out.get_output().stderr).unwrap();
    assert_eq!(err["kind"], "error");
    gbs().args(["graph", "validate"]).arg(Path::new("/nonexistent/file.json")).assert().code(1);
}

#[test]
fn sequential_and_parallel_agree() {
    let d = setup();
    let x = path(&d, "x.json");
    gbs().args(["move", "random", "--steps", "5", "--seed", "8"]).arg(path(&d, "t.json")).arg("-o").arg(&x).assert().success();
    let a = report(gbs().args(["--threads", "1", "dist"]).arg(path(&d, "t.json")).arg(&x));
    let b = report(gbs().args(["--threads", "0", "dist"]).arg(path(&d, "t.json")).arg(&x));
    assert_eq!(a, b);
}

#[test]
fn flags_after_word_tokens() {
    let d = setup();
    let out = gbs().args(["wh", "graph", "--graph"]).arg(path(&d, "bs24.json")).args(["t", "--dot"]).assert().success();
    let s = String::from_utf8(out.get_output().stdout.clone()).unwrap();
    assert!(s.starts_with("graph \"Wh_a\" {"));
}

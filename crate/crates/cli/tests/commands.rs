use std::path::PathBuf;
use std::process::Command as Proc;

use serde_json::Value;

use primkg::io;
use primkg_cli::{render, run, Command, Options};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).expect("corpus file")
}

fn json(cmd: Command, name: &str) -> Value {
    run(cmd, &corpus(name), &Options::default()).expect("command succeeds").json
}

#[test]
fn validate_g3() {
    let v = json(Command::Validate, "g3.kg");
    assert_eq!(v["valid"], true);
    assert_eq!(v["k"], 2);
}

#[test]
fn validate_reports_invalid_action_without_failing() {
    let text = "k 1\nvertices v\nedge a 1 v v\nedge b 1 v v\ngroup 1 g\nmul g g = 1\nact g a = b g\nact g b = b g\n";
    let v = run(Command::Validate, text, &Options::default()).unwrap().json;
    assert_eq!(v["valid"], false);
    assert!(v["error"].is_string());
}

#[test]
fn tails_g5() {
    let v = json(Command::Tails, "g5.kg");
    let tails = v["tails"].as_array().unwrap();
    assert_eq!(tails.len(), 2);
    assert_eq!(tails[0]["tail"], serde_json::json!(["u", "w"]));
    assert_eq!(tails[1]["tail"], serde_json::json!(["u"]));
    for t in tails {
        assert_eq!(t["classification"]["class"], "tau");
    }
    assert_eq!(v["bounds"]["degree"], serde_json::json!([4]));
}

#[test]
fn closure_g5_first_branch() {
    let v = json(Command::Closure, "g5.kg");
    assert_eq!(v["verdict"], true);
    assert_eq!(v["case"], "4a");
    assert_eq!(v["witness"], serde_json::json!([["u", "w"]]));
}

#[test]
fn closure_without_queries_is_an_error() {
    assert!(run(Command::Closure, &corpus("g4_flip.kg"), &Options::default()).is_err());
}

#[test]
fn per_g3_and_caveat() {
    let v = json(Command::Per, "g3.kg");
    assert_eq!(v["tails"][0]["invariants"], serde_json::json!([1, 1]));
    let p = json(Command::Prim, "g3.kg");
    assert_eq!(p["caveats"].as_array().unwrap().len(), 1);
}

#[test]
fn bound_length_checked() {
    let opts = Options { bound: Some(vec![2]), depth: None };
    assert!(run(Command::Tails, &corpus("g3.kg"), &opts).is_err());
    let opts = Options { bound: Some(vec![2, 2]), depth: None };
    let v = run(Command::Tails, &corpus("g3.kg"), &opts).unwrap().json;
    assert_eq!(v["bounds"]["degree"], serde_json::json!([2, 2]));
}

#[test]
fn spec_order_dot() {
    let out = run(Command::SpecOrder, &corpus("g5.kg"), &Options::default()).unwrap();
    let dot = out.dot.expect("dot output");
    assert!(dot.contains("s0 -> s1 [label=\"always\"];"));
}

#[test]
fn repr_check_g5_probes() {
    let opts = Options { bound: None, depth: Some(4) };
    let v = run(Command::ReprCheck, &corpus("g5.kg"), &opts).unwrap().json;
    for stratum in v["strata"].as_array().unwrap() {
        assert_eq!(stratum["relations"]["violations"], serde_json::json!([]));
        for p in stratum["vertex_probes"].as_array().unwrap() {
            assert_eq!(p["acts_as_zero"], p["outside_tail"]);
        }
    }
}

#[test]
fn deterministic_output() {
    for cmd in [Command::Tails, Command::Prim, Command::Hypotheses, Command::SpecOrder] {
        for name in ["g2.kg", "g4.kg", "g5.kg", "g3.kg"] {
            let a = render(&json(cmd, name));
            let b = render(&json(cmd, name));
            assert_eq!(a, b);
        }
    }
}

#[test]
fn corpus_round_trips() {
    let mut seen = 0;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("kg") {
            continue;
        }
        let doc = io::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = io::parse(&doc.serialize()).unwrap();
        assert_eq!(doc, again, "{}", path.display());
        assert_eq!(doc.serialize(), again.serialize());
        seen += 1;
    }
    assert!(seen >= 7);
}

fn binary() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_primkg"))
}

#[test]
fn binary_exit_codes() {
    let ok = binary().arg("closure").arg(corpus_dir().join("g1.kg")).output().unwrap();
    assert!(ok.status.success());
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["verdict"], false);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.kg");
    std::fs::write(&bad, "vertices v\n").unwrap();
    let out = binary().arg("tails").arg(&bad).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let missing = binary().arg("tails").arg(dir.path().join("absent.kg")).output().unwrap();
    assert!(!missing.status.success());
}

#[test]
fn binary_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("order.dot");
    let out = binary()
        .args(["spec-order", corpus_dir().join("g5.kg").to_str().unwrap(), "--dot", dot.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
}

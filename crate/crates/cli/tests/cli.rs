use std::process::Command;

use bkss_cli::report::{D1Report, E2Report};
use serde_json::Value;

fn bkss(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bkss")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn documented_examples() {
    let (code, out, _) = bkss(&["e1", "--p", "3", "--q", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("free rank: 1"), "{out}");
    let (_, out, _) = bkss(&["e1", "--p", "0", "--q", "1"]);
    assert!(out.starts_with("E1(0,1) = 0\n"), "{out}");
    let (_, out, _) = bkss(&["e1", "--p", "5", "--q", "5"]);
    assert!(out.contains("free rank: 6"), "{out}");
    let (_, out, _) = bkss(&["trees", "--degree", "2", "--modulo", "as,ihx"]);
    assert!(out.ends_with(": Z\n"), "{out}");
    let (code, out, _) = bkss(&["d1", "--p", "5", "--oracle"]);
    assert_eq!(code, 0);
    assert!(out.contains("oracle: agree on 12 generators"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(bkss(&["e2", "--p", "8"]).0, 2);
    assert_eq!(bkss(&["e2", "--p", "3", "--format", "dot"]).0, 2);
    assert_eq!(bkss(&["verify", "--suite", "nothing"]).0, 2);
    assert_eq!(bkss(&["trees", "--degree", "2", "--modulo", "stu"]).0, 2);
    assert_eq!(bkss(&["e1", "--p", "4", "--q", "3"]).0, 2);
    assert_eq!(bkss(&["export-dot"]).0, 2);
    assert_eq!(bkss(&["frobnicate"]).0, 2);
    assert_eq!(bkss(&["verify", "--suite", "oracle"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    for args in [&["d1", "--p", "5", "--format", "json"][..], &["e2", "--p", "5"], &["dsep", "--p", "5"]] {
        let a = bkss(args).1;
        let b = bkss(&[args, &["--jobs", "3"]].concat()).1;
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn json_schema() {
    let (_, out, _) = bkss(&["e2", "--p", "4", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["p"], 4);
    assert_eq!(v["e2_invariant_factors"], Value::Array(vec![]));
    assert_eq!(v["group"]["free_rank"], 1);
    assert_eq!(v["d1_matrix_rank"], 1);
    for key in ["marked_graphs", "stu2_relations", "image_in_stu2", "stu2_in_image", "equal"] {
        assert!(!v["certificates"][key].is_null(), "{key}");
    }
    let typed: E2Report = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&typed).unwrap() + "\n", out);

    let (_, out, _) = bkss(&["d1", "--p", "4", "--oracle", "--format", "json"]);
    let typed: D1Report = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&typed).unwrap() + "\n", out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["separated"].as_array().unwrap().len(), 2);
    assert_eq!(v["oracle"]["agree"], true);
    assert_eq!(v["tree_rank"], 1);
}

#[test]
fn dot_output() {
    let (code, out, _) = bkss(&["export-dot", "--term", "[[x14,x24],x34]"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph \"term\" {") && out.contains("rank=same"), "{out}");
    let (_, out, _) = bkss(&["trees", "--degree", "2", "--format", "dot"]);
    assert_eq!(out.matches("graph \"").count(), 2);
    let (_, out, _) = bkss(&["export-dot", "--p", "4"]);
    assert_eq!(out.matches("graph \"").count(), 2);
    let dir = std::env::temp_dir().join(format!("bkss-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.dot");
    let (code, out, _) = bkss(&["export-dot", "--degree", "1", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&path).unwrap().contains("label=\"2\""));
    std::fs::remove_dir_all(dir).unwrap();
}

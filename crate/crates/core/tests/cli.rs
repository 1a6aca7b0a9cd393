mod common;

use std::path::PathBuf;
use std::process::Command;

use immorder::cli::{run, run_with_input, EXIT_INVALID, EXIT_OK, EXIT_UNDETERMINED};
use immorder::order::{parse_dot, Rule};
use serde_json::Value;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = manifest_dir().join("schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn invoke(args: &[&str]) -> (i32, String) {
    let out = run(std::iter::once("immorder").chain(args.iter().copied()));
    (out.code, out.stdout)
}

fn assert_valid(name: &str, stdout: &str) {
    let v: Value = serde_json::from_str(stdout).unwrap_or_else(|e| panic!("{name}: {e}\n{stdout}"));
    assert!(schema(name).is_valid(&v), "{name} output violates its schema:\n{stdout}");
}

const MINIMAL_S4: &str = r#"{"group":"trivial","w1":0,"w2":"0","c":0}"#;
const M4: &str = r#"{"group":"cyclic","n":4,"w1":0,"w2":"1","c":0}"#;
const Z4_E12: &str = r#"{"group":"Z4","w1":0,"w2":"e12","c":2}"#;
const M_PRESENTATION: &str = "<a,b|aaaBAAAbbaaababb, aaabAAbbaaaBABAAAB>";

fn successful_invocations() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("homology", vec!["homology", "--group", "Z/4", "--twist", "w", "--degree", "4"]),
        ("homology", vec!["homology", "--group", "Z4", "--coeff", "Z2", "--degree", "2"]),
        ("sq2w", vec!["sq2w", "--group", "Z/4", "--w1", "1", "--w2", "1", "--degree", "2"]),
        ("sq2w", vec!["sq2w", "--group", "Z4", "--w1", "0", "--w2", "e12+e34", "--degree", "1"]),
        ("realizable", vec!["realizable", "--group", "Z4", "--w1", "0", "--w2", "e12+e34"]),
        ("realizable", vec!["realizable", "--group", "Z/6", "--w1", "1", "--w2", "0"]),
        ("leq", vec!["leq", MINIMAL_S4, M4]),
        ("leq", vec!["leq", M4, MINIMAL_S4]),
        ("order_graph", vec!["order-graph", "--family", "cyclic", "--max-exp", "2", "--combined", "--format", "json"]),
        ("order_graph", vec!["order-graph", "--family", "z4", "--max-c", "4", "--format", "json"]),
        ("model_cohomology", vec!["model-cohomology", "--k", "3", "--coeff", "ZZ2w"]),
        ("shift", vec!["shift", "--group", "Z/4"]),
        ("shift", vec!["shift", "--group", "Z/3", "--w", "0", "--seed", "7"]),
        ("fibered", vec!["fibered", "--relator", "aaaBAAAbbaaababb", "--phi", "a=-1,b=1"]),
        ("fibered", vec!["fibered", "--relator", "abab", "--phi", "a=-1,b=1"]),
        ("abelianization", vec!["abelianization", "--presentation", M_PRESENTATION]),
        ("integral_lift", vec!["integral-lift", "--presentation", M_PRESENTATION, "--w1", "a=0,b=1"]),
        ("integral_lift", vec!["integral-lift", "--presentation", "<a,b|aaaBAAAbbaaababb>", "--w1", "a=0,b=1"]),
        ("chain_verify", vec!["chain-verify", "--source", "6", "--target", "2"]),
    ]
}

#[test]
fn json_outputs_match_schemas() {
    for (name, args) in successful_invocations() {
        let (code, stdout) = invoke(&args);
        assert_eq!(code, EXIT_OK, "{args:?}\n{stdout}");
        assert_valid(name, &stdout);
    }
}

#[test]
fn outputs_are_deterministic() {
    for (_, args) in successful_invocations() {
        assert_eq!(invoke(&args), invoke(&args), "{args:?}");
    }
    let dot = ["order-graph", "--family", "nonorientable", "--max-exp", "3"];
    assert_eq!(invoke(&dot), invoke(&dot));
}

#[test]
fn invalid_input_exits_with_2() {
    let cases: [&[&str]; 7] = [
        &["homology", "--group", "Z/5", "--twist", "w", "--degree", "4"],
        &["homology", "--group", "SL2", "--degree", "1"],
        &["leq", r#"{"group":"cyclic","w1":0,"w2":"0","c":0}"#, MINIMAL_S4],
        &["leq", r#"{"group":"cyclic","n":3,"w1":1,"w2":"0","c":0}"#, MINIMAL_S4],
        &["fibered", "--relator", "abx", "--phi", "a=1,b=1"],
        &["integral-lift", "--presentation", "<a,b|aab>", "--w1", "a=0,b=1"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, stdout) = invoke(args);
        assert_eq!(code, EXIT_INVALID, "{args:?}");
        assert_valid("error", &stdout);
    }
}

#[test]
fn undetermined_exits_with_3() {
    let (code, stdout) = invoke(&["leq", Z4_E12, M4]);
    assert_eq!(code, EXIT_UNDETERMINED);
    assert_valid("leq", &stdout);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["answer"], Value::Null);
    assert_eq!(v["trace"][0], "not-covered");
}

#[test]
fn s4_is_below_everything() {
    for b in [M4, Z4_E12, MINIMAL_S4] {
        let (code, stdout) = invoke(&["leq", MINIMAL_S4, b]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(v["answer"], Value::Bool(true));
        let first = if b == MINIMAL_S4 { "equal-after-canonicalization" } else { "S4-minimum" };
        assert_eq!(v["trace"][0], first);
    }
}

#[test]
fn leq_reads_stdin() {
    let mut stdin = M4.as_bytes();
    let out = run_with_input(["immorder", "leq", "-", MINIMAL_S4], &mut stdin);
    assert_eq!(out.code, EXIT_OK);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["answer"], Value::Bool(false));
    assert_eq!(v["trace"][0], "below-S4-iff-spin");
}

#[test]
fn leq_reads_files() {
    let dir = std::env::temp_dir().join(format!("immorder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    std::fs::write(&a, M4).unwrap();
    std::fs::write(&b, r#"{"group":"cyclic","n":8,"w1":0,"w2":"1","c":0}"#).unwrap();
    let (code, stdout) = invoke(&["leq", a.to_str().unwrap(), b.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["answer"], Value::Bool(true));
    assert_eq!(v["trace"][0], "orientable-cyclic-chain");
}

#[test]
fn combined_figure_as_dot() {
    let (code, stdout) = invoke(&["order-graph", "--family", "cyclic", "--max-exp", "2", "--combined"]);
    assert_eq!(code, EXIT_OK);
    let (nodes, edges) = parse_dot(&stdout).unwrap();
    assert_eq!(edges, common::combined_figure_edges());
    assert_eq!(nodes.len(), 14);
    assert!(stdout.contains("[label=\"<\"]"));
}

#[test]
fn fibered_reports_unique_extrema() {
    let (_, stdout) = invoke(&["fibered", "--relator", "aaaBAAAbbaaababb", "--phi", "a=-1,b=1"]);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["fibered"], Value::Bool(true));
    assert_eq!((v["min_index"].as_i64(), v["min"].as_i64()), (Some(4), Some(-4)));
    assert_eq!((v["max_index"].as_i64(), v["max"].as_i64()), (Some(9), Some(1)));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_immorder");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["shift", "--group", "Z/2"]), Some(EXIT_OK));
    assert_eq!(status(&["shift", "--group", "Z/3"]), Some(EXIT_INVALID));
    assert_eq!(status(&["leq", Z4_E12, M4]), Some(EXIT_UNDETERMINED));
}

#[test]
fn readme_documents_every_rule() {
    let readme = std::fs::read_to_string(manifest_dir().join("../../README.md")).unwrap();
    let section = readme.split("## Rules cited").nth(1).expect("rule section");
    let section = section.split("\n## ").next().unwrap();
    let rows: Vec<(String, String)> = section
        .lines()
        .filter_map(|l| {
            let cells: Vec<&str> = l.trim().trim_matches('|').split('|').map(str::trim).collect();
            let id = cells.first()?.strip_prefix('`')?.strip_suffix('`')?;
            Some((id.to_string(), cells.get(1)?.to_string()))
        })
        .collect();
    let rules = Rule::all();
    assert_eq!(rows.len(), rules.len());
    for rule in rules {
        let matches: Vec<_> = rows.iter().filter(|(id, _)| *id == rule.id()).collect();
        assert_eq!(matches.len(), 1, "{}", rule.id());
        assert_eq!(matches[0].1, rule.statement().replace('|', "\\|"), "{}", rule.id());
    }
}

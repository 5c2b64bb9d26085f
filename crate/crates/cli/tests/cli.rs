use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_closurium"))
        .args(args)
        .env_remove("CLOSURIUM_CAP")
        .output()
        .expect("binary runs")
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn check_closure_on_four_point_frame() {
    let v = json_out(&run(&["check", "-m", &path("four.json"), "-f", "C(a)"]));
    assert_eq!(v["result"], serde_json::json!(["0", "1", "2", "3"]));
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 0);
    assert_eq!(v["caps"]["enumeration"], 65536);
}

#[test]
fn syntax_error_exits_2_with_offset() {
    let o = run(&["check", "-m", &path("chain.json"), "-f", "a U"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 3"));
}

#[test]
fn missing_model_and_unknown_atom_exit_2() {
    assert_eq!(run(&["check", "-m", "/nonexistent.json", "-f", "a"]).status.code(), Some(2));
    assert_eq!(run(&["check", "-m", &path("chain.json"), "-f", "nope"]).status.code(), Some(2));
}

#[test]
fn unsupported_exits_3() {
    let o = run(&["check", "-m", &path("fuzzy.json"), "-f", "R(f)"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["check", "-m", &path("chain.json"), "-f", "z", "--format", "pgm"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn env_cap_is_honoured_and_recorded() {
    let o = Command::new(env!("CARGO_BIN_EXE_closurium"))
        .args(["check", "-m", &path("chain.json"), "-f", "p U q"])
        .env("CLOSURIUM_CAP", "1234")
        .output()
        .unwrap();
    assert_eq!(json_out(&o)["caps"]["enumeration"], 1234);
    let bad = Command::new(env!("CARGO_BIN_EXE_closurium"))
        .args(["check", "-m", &path("chain.json"), "-f", "p"])
        .env("CLOSURIUM_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn grid_surrounded_as_pgm() {
    let o = run(&["check", "-m", &path("grid.json"), "-f", "a S b", "--format", "pgm"]);
    assert!(o.status.success());
    assert!(o.stdout.starts_with(b"P5\n8 8\n255\n"));
    let pixels = &o.stdout[o.stdout.len() - 64..];
    // the inner 4×4 block is enclosed by the ring `b`
    assert_eq!(pixels.iter().filter(|&&p| p == 255).count(), 16);
    assert_eq!(pixels[2 * 8 + 2], 255);
}

#[test]
fn dot_and_table_outputs() {
    let o = run(&["check", "-m", &path("chain.json"), "-f", "p U q", "--format", "dot"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("digraph"));
    assert!(s.contains("n0 [label=\"0\", fillcolor=gold]"));
    assert!(s.contains("n1 [label=\"1\", fillcolor=white]"));
    let o = run(&["check", "-m", &path("fuzzy.json"), "-f", "B(f)", "--format", "table"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "p\t1/5\nq\t0\nr\t0\n");
}

#[test]
fn json_result_round_trips_as_atom() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("until.json");
    let o = run(&[
        "check", "-m", &path("chain.json"), "-f", "p U q", "-o", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let spec = format!("u={}", out.display());
    let v = json_out(&run(&["check", "-m", &path("chain.json"), "-f", "u", "--atom", &spec]));
    assert_eq!(v["result"], serde_json::json!(["0"]));
    let v = json_out(&run(&["check", "-m", &path("chain.json"), "-f", "C(u)", "--atom", &spec]));
    assert_eq!(v["result"], serde_json::json!(["0", "1"]));
}

#[test]
fn laws_report_pre_and_suc() {
    let v = json_out(&run(&["laws", "-m", &path("four.json")]));
    let laws = &v["report"]["laws"];
    assert_eq!(laws["additive"]["status"], "fails");
    assert_eq!(laws["additive"]["witness"], serde_json::json!([["2"], ["3"]]));
    assert_eq!(laws["grounded"]["status"], "holds");
    let v = json_out(&run(&["laws", "-m", &path("four_suc.json"), "--laws", "grounded,fully_additive"]));
    let laws = v["report"]["laws"].as_object().unwrap();
    assert_eq!(laws["grounded"]["status"], "holds");
    assert_eq!(laws["fully_additive"]["status"], "holds");
    assert_eq!(laws.values().filter(|l| l["status"] == "not_checked").count(), 5);
}

#[test]
fn laws_sampled_records_seed() {
    let v = json_out(&run(&["laws", "-m", &path("grid.json"), "--samples", "50", "--seed", "9"]));
    assert_eq!(v["report"]["seed"], 9);
    assert_eq!(v["seed"], 9);
}

#[test]
fn exhaustive_laws_over_cap_exit_3() {
    let o = run(&["laws", "-m", &path("grid.json"), "--cap", "1024"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invalid_explicit_table_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("bad.json");
    // c(∅) = {1} but c({0}) = {0}: not monotone
    std::fs::write(
        &m,
        r#"{"schema": 1, "type": "explicit", "points": 2,
            "closure": {"table": [[1], [0], [1], [0, 1]]}}"#,
    )
    .unwrap();
    let o = run(&["laws", "-m", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not monotone"));
}

#[test]
fn prove_valid_and_corrupted() {
    let o = run(&["prove", "-d", &path("proof_cl1.json")]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(data("proof_cl1.json")).unwrap().replace("Cl-1", "Cl-9");
    std::fs::write(&bad, text).unwrap();
    let o = run(&["prove", "-d", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("root"));
}

#[test]
fn prove_with_models_reports_each() {
    let models = ["four.json", "four_suc.json", "chain.json", "two.json", "grid.json"];
    let mut args = vec!["prove".to_string(), "-d".into(), path("proof_cl1.json")];
    // chain/grid lack atom `a`; use models that define it
    for m in models.iter().filter(|m| !matches!(**m, "chain.json")) {
        args.push("-m".into());
        args.push(path(m));
    }
    let o = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    let v = json_out(&o);
    assert_eq!(v["models"].as_array().unwrap().len(), 4);
    assert!(v["unsound"].is_null());
}

#[test]
fn prove_unsound_rule_exits_4_and_names_node() {
    let o = run(&["prove", "-d", &path("proof_cl2_unsound.json"), "-m", &path("two.json")]);
    assert_eq!(o.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["unsound"]["rule"], "Cl-2");
    assert_eq!(v["unsound"]["path"], "root");
}

#[test]
fn outputs_are_deterministic() {
    let a = run(&["laws", "-m", &path("grid.json"), "--samples", "30", "--seed", "4"]);
    let b = run(&["laws", "-m", &path("grid.json"), "--samples", "30", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

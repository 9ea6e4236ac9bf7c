use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qcalab")).current_dir(dir).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(dir: &Path, args: &[&str]) -> Value {
    let (code, out) = run(dir, args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

fn here() -> &'static Path {
    Path::new(".")
}

const FLIP: &str = r#"{"alphabet":["b","a"],"blank":"b","states":["q0","qf"],"q0":"q0","qf":"qf",
 "delta":[{"q":"q0","read":"b","write":"a","q2":"q0","move":"R","re":1},
          {"q":"q0","read":"a","write":"b","q2":"q0","move":"R","re":1},
          {"q":"qf","read":"b","write":"b","q2":"qf","move":"R","re":1},
          {"q":"qf","read":"a","write":"a","q2":"qf","move":"R","re":1}]}"#;

#[test]
fn eca_rule_90_draws_sierpinski_rows() {
    let (code, out) = run(here(), &["eca", "--rule", "90", "--steps", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "...#...\n..#.#..\n.#...#.\n#.#.#.#\n");
}

#[test]
fn eca_pbm_has_header_and_rows() {
    let (code, out) = run(here(), &["eca", "--rule", "30", "--steps", "2", "--format", "pbm"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("P1"));
    assert_eq!(lines.next(), Some("5 3"));
}

#[test]
fn ring_seed_random_is_reproducible_per_seed() {
    let a = run(here(), &["eca", "--rule", "30", "--seed", "random", "--width", "20", "--ring", "--rng-seed", "1"]);
    let b = run(here(), &["eca", "--rule", "30", "--seed", "random", "--width", "20", "--ring", "--rng-seed", "2"]);
    assert_eq!(a.0, 0);
    assert_ne!(a.1, b.1);
}

#[test]
fn glider_returns_shifted_after_four_steps() {
    let v = json(here(), &["ca2d", "--pattern", "glider", "--steps", "4", "--format", "json"]);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 5);
    let live =
        |s: &Value| s.as_array().unwrap().iter().map(|r| r.as_str().unwrap().matches('#').count()).sum::<usize>();
    assert!(steps.iter().all(|s| live(s) == 5));
}

#[test]
fn interferometer_reports_both_detectors() {
    let v = json(here(), &["interferometer"]);
    assert!((v["A"].as_f64().unwrap()).abs() < 1e-12);
    assert!((v["B"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn epr_trace_starts_at_step_one() {
    let v = json(here(), &["pqca-epr", "--steps", "3"]);
    let steps = v.as_array().unwrap();
    assert_eq!(steps.len(), 3);
    let labels: Vec<&str> = steps[0].as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["{0:(+,0,-)}", "{0:(-,0,+)}"]);
    let last: Vec<&str> = steps[2].as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(last, ["{-2:(+,0,0),2:(0,0,-)}", "{-2:(-,0,0),2:(0,0,+)}"]);
}

#[test]
fn compiled_machine_round_trips_through_pqca_run() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("flip.json"), FLIP).unwrap();
    let compiled = json(dir.path(), &["compile-qtm", "--in", "flip.json"]);
    assert_eq!(compiled["k_r"], serde_json::json!(["q0", "qf"]));
    assert_eq!(compiled["k_l"], serde_json::json!([]));
    assert_eq!(compiled["offsets"], serde_json::json!([1, 0, -1]));
    fs::write(dir.path().join("pqca.json"), compiled.to_string()).unwrap();
    let trace = json(dir.path(), &["pqca-run", "--spec", "pqca.json", "--init", "-1:(#,b,q0)", "--steps", "2"]);
    for step in trace.as_array().unwrap() {
        let terms = step.as_array().unwrap();
        assert_eq!(terms.len(), 1);
        assert!((terms[0]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn equiv_reports_matching_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("flip.json"), FLIP).unwrap();
    let v = json(
        dir.path(),
        &["equiv", "--machine", "flip.json", "--input", "bb", "--steps", "4", "--k", "1", "--accept", "a"],
    );
    assert_eq!(v["p_qtm"].as_f64(), Some(1.0));
    assert_eq!(v["p_pqca"].as_f64(), Some(1.0));
    assert_eq!(v["qtm_steps"], v["pqca_steps"]);
}

#[test]
fn bqca_trace_file_holds_every_step() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.json"), r#"["H*I", "CNOT"]"#).unwrap();
    let last = json(dir.path(), &["bqca-run", "--n", "2", "--schedule", "s.json", "--steps", "2", "--trace", "t.json"]);
    let trace: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(trace.as_array().unwrap().len(), 3);
    // Step 1 acts on no pair when n = 2, so this is (|00> + |10>)/sqrt2.
    let labels: Vec<&str> = last.as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["00", "10"]);
}

#[test]
fn tolerance_flags_are_validated() {
    let (code, _) = run(here(), &["--tolerance-norm", "-1", "interferometer"]);
    assert_eq!(code, 2);
    let (code, _) = run(here(), &["interferometer", "--tolerance-unitary", "1e-6"]);
    assert_eq!(code, 0);
}

#[test]
fn pbm_is_rejected_for_quantum_commands() {
    assert_eq!(run(here(), &["interferometer", "--format", "pbm"]).0, 2);
}

#[test]
fn qca_check_names_a_witness_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("leaky.json"),
        r#"{"states":["0","1"],"quiescent":"0","neighborhood":[0],"delta":[{"nbhd":["0"],"target":"0","re":1},{"nbhd":["1"],"target":"1","re":0.9}]}"#,
    )
    .unwrap();
    let (code, out) = run(dir.path(), &["qca-check", "--spec", "leaky.json"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["local_probability"]["worst_tuple"], serde_json::json!(["1"]));
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn flattened_epr_passes_qca_check() {
    let dir = tempfile::tempdir().unwrap();
    let epr: qcalab::PqcaSpec = qcalab::pqca::epr_spec();
    let flat = qcalab::pqca::as_qca(&epr).unwrap();
    fs::write(dir.path().join("epr.json"), qcalab::format::qca_to_json(&flat).to_string()).unwrap();
    let (code, out) = run(dir.path(), &["qca-check", "--spec", "epr.json"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["well_formed_window_n"]["holds"], true);
    assert_eq!(v["unitary_window_n"]["decisive"], false);
}

#[test]
fn eca_examples() {
    let (_, out) = run(here(), &["eca", "--rule", "126", "--steps", "10", "--seed", "single"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[1], format!("{}###{}", ".".repeat(9), ".".repeat(9)));
    let (_, out) = run(here(), &["eca", "--rule", "0", "--steps", "3", "--seed", "single"]);
    assert!(out.lines().skip(1).all(|r| !r.contains('#')));
}

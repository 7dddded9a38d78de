use std::process::{Command, Output};

const CORNER: &str = r#"{"n":3,"I":[1,2],"J":[2,3],"K":[2,3]}"#;
const TRIPLE_246: &str = r#"{"n":6,"I":[2,4,6],"J":[2,4,6],"K":[2,4,6]}"#;
const W2: &str = r#"{"n":3,"I":[1,3],"J":[1,3],"K":[2,3]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hivepoly")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn lr_of_246_is_two() {
    let o = run(&["lr", "--in", TRIPLE_246]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2");
}

#[test]
fn corner_problem_synthesizes_e2() {
    let o = run(&["synth", "--in", CORNER, "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "E2");
}

#[test]
fn synth_refuses_multiplicity_two() {
    let o = run(&["synth", "--in", TRIPLE_246]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("is 2"));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(run(&["lr", "--in", r#"{"n":2,"I":[3],"J":[1],"K":[1]}"#]).status.code(), Some(1));
    assert_eq!(run(&["lr", "--in", "{not json"]).status.code(), Some(1));
    assert_eq!(run(&["lr", "--in", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["lr", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["synth", "--in", r#"{"n":2,"I":[1],"J":[1],"K":[1]}"#]).status.code(), Some(2));
    assert_eq!(run(&["lr", "--in", CORNER, "--prime", "12"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--in", CORNER, "--prime", "12"]).status.code(), Some(1));
}

#[test]
fn input_from_file_and_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    let out = dir.path().join("o.json");
    std::fs::write(&input, W2).unwrap();
    let o = run(&["synth", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let poly: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(poly["n"], 3);
}

#[test]
fn measures_feed_back_into_rigid_and_render() {
    let o = run(&["measures", "--in", W2, "--format", "json"]);
    let list: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let measure = list[0].to_string();
    let rigid = run(&["rigid", "--in", &measure]);
    assert_eq!(stdout(&rigid), "rigid");
    let svg = stdout(&run(&["render", "--in", &measure]));
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>"));
    assert!(svg.contains("stroke-dasharray"));
    assert_eq!(svg.matches("<line").count(), 5);
}

#[test]
fn nonrigid_measures_come_with_witnesses() {
    let o = run(&["rigid", "--in", TRIPLE_246, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verdicts = v.as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert!(verdicts.iter().all(|x| x["rigid"] == false && x["witness"]["kind"].is_string()));
}

#[test]
fn dual_and_decompose() {
    let d = stdout(&run(&["dual", "--in", W2]));
    assert!(d.starts_with("n=3 I={2} J={2} K={3}"));
    let o = run(&["decompose", "--in", W2, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["components"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_reports_seeds() {
    let o = run(&["verify", "--in", W2, "--seed", "7", "--trials", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["report"]["seeds"], serde_json::json!([7, 8, 9]));
}

#[test]
fn horn_and_census() {
    let h = run(&["horn", "--size", "4", "--blocks", "2,4", "--trials", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&h)).unwrap();
    assert_eq!(v["violations"], 0);

    let a = stdout(&run(&["census", "--n", "4", "--seed", "3"]));
    let b = stdout(&run(&["census", "--n", "4", "--seed", "3"]));
    assert_eq!(a, b);
    let rows: Vec<&str> = a.lines().skip(2).collect();
    assert!(!rows.is_empty());
    for row in rows {
        let cells: Vec<&str> = row.split('\t').collect();
        if cells[4] == "1" {
            assert_eq!(cells[7], "true", "{row}");
        }
    }
}

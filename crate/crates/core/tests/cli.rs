use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn hdx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdx"))
        .args(args)
        .env_remove("HDX_SEED")
        .output()
        .expect("run hdx")
}

fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("docs/schemas/{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(name: &str, text: &str) {
    let s = schema(name);
    let v: Value = serde_json::from_str(text).unwrap_or_else(|e| panic!("{name}: {e}: {text}"));
    let msgs: Vec<String> = match s.validate(&v) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{name} schema violations: {msgs:?}\n{text}");
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_complete_writes_ten_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k5.json");
    let o = hdx(&["generate", "complete", "5", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_valid("complex", &text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["facets"].as_array().unwrap().len(), 10);

    let o = hdx(&["spectrum", "--input", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_valid("spectrum", &stdout(&o));
}

#[test]
fn spectrum_of_k4() {
    let o = hdx(&["spectrum", "--generator", "complete:4:1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_valid("spectrum", &text);
    let v: Value = serde_json::from_str(&text).unwrap();
    let dims = v["dims"].as_array().unwrap();
    let j0 = dims.iter().find(|d| d["j"] == 0).unwrap();
    let nontrivial: Vec<f64> = j0["nontrivial"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(nontrivial.len(), 3);
    assert!(nontrivial.iter().all(|l| (l - 4.0).abs() < 1e-9));
}

#[test]
fn certify_three_cycle() {
    let o = hdx(&["certify", "--generator", "complete:3:1", "--j", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_valid("certificate", &text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!((v["k"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(v["eps"].as_f64().unwrap(), 0.0);
    assert_eq!(v["valid"], true);
}

#[test]
fn mixing_on_ideal_complex_has_zero_slack() {
    let o = hdx(&["mixing", "--generator", "complete:5:2", "--sizes", "1,2,2", "--trials", "6", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    for (t, line) in lines[..6].iter().enumerate() {
        assert_valid("mixing_trial", line);
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["trial"], t);
        assert!(v["report"]["slack"].as_f64().unwrap().abs() < 1e-9);
    }
    assert_valid("summary", lines[6]);
}

#[test]
fn descent_json_and_jsonl() {
    let args = ["descent", "--generator", "lm:2:9:0.7:4", "--sizes", "2,2,2", "--trials", "3", "--seed", "5"];
    let o = hdx(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    for line in &lines[..3] {
        assert_valid("descent_trial", line);
    }
    assert_valid("summary", lines[3]);

    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let o = hdx(&json_args);
    assert_valid("summary", &stdout(&o));
}

#[test]
fn galleries_on_k4() {
    let o = hdx(&["galleries", "--generator", "complete:4:1", "--j", "1", "--sets", "[[0],[1],[2]]"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_valid("galleries", &text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["operator_pitchfork"], 1);
}

#[test]
fn invariants_on_seeded_lm_complexes() {
    for seed in 0..50u64 {
        let d = 1 + seed % 3;
        let n = d + 4 + seed % 4;
        let spec = format!("lm:{d}:{n}:0.5:{seed}");
        let o = hdx(&["invariants", "--generator", &spec]);
        assert_eq!(o.status.code(), Some(0), "{spec}");
        let text = stdout(&o);
        assert_valid("invariants", &text);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["all_hold"], true, "{spec}");
    }
}

#[test]
fn applications_commands() {
    let o = hdx(&["chromatic", "--generator", "lm:2:8:0.6:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_valid("chromatic", &stdout(&o));

    let o = hdx(&["ideal", "--generator", "complete:6:2", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_valid("ideal", &text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["accepted"], true);
    assert_eq!(v["samples"].as_array().unwrap().len(), 20);

    let o = hdx(&["overlap", "--generator", "complete:5:2", "--pach", "0.1", "--trials", "2", "--random-points", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert_valid("overlap", &stdout(&o));
}

#[test]
fn export_boundary_matrix() {
    let o = hdx(&["export", "--generator", "complete:3:2", "--operator", "boundary", "--j", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3 1 3\n0 0 1\n1 0 -1\n2 0 1\n");
}

#[test]
fn bad_input_gives_error_object() {
    let o = hdx(&["certify", "--generator", "complete:3:1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_valid("error", err.trim());

    let o = hdx(&["spectrum", "--generator", "torus:3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_valid("error", String::from_utf8(o.stderr).unwrap().trim());

    let o = hdx(&["spectrum", "--input", "/nonexistent/complex.json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "io");
}

#[test]
fn invalid_certificate_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.json");
    std::fs::write(&path, r#"{"n":6,"facets":[[0,1,2],[3,4,5]]}"#).unwrap();
    let o = hdx(&["mixing", "--input", path.to_str().unwrap(), "--sizes", "1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_valid("error", err.trim());
    assert!(err.contains("not an expander at j=0"), "{err}");
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hdx"));
        c.args(["mixing", "--generator", "lm:2:8:0.8:1", "--sizes", "2,2,2", "--trials", "2"]);
        c.env_remove("HDX_SEED");
        if let Some(s) = env {
            c.env("HDX_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("17"), None), run(None, Some("17")));
    assert_ne!(run(Some("17"), None), run(None, None));
    assert_eq!(run(Some("3"), Some("17")), run(None, Some("17")));
}

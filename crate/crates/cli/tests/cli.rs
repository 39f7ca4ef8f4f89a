use std::path::Path;
use std::process::{Command, Output};

fn run_with(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superchar")).env("SUPERCHAR_CACHE", cache).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn kl_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(&dir.path().join("c.json"), &["kl", "--n", "4", "--x", "1234", "--w", "3412"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1+q\n");
}

#[test]
fn trivial_gl_k2_character_is_one_term() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(&dir.path().join("c.json"), &["char", "--k", "2", "--weight", "level=0;", "--depth", "4", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(doc["depth"], 4);
    assert_eq!(doc["terms"], serde_json::json!([{ "drop": {}, "mult": 1 }]));
}

#[test]
fn reflecting_the_zero_weight_only_moves_the_ordering() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(&dir.path().join("c.json"), &["reflect", "--sequence", "bs:2", "--tuple", "a=0;l0=;lm=();lp=()", "--format", "json"]);
    let doc = json(&out);
    let zero = serde_json::json!({ "level": 0, "coeffs": {} });
    assert_eq!(doc["final"]["weight"], zero);
    assert_eq!(doc["steps"].as_array().unwrap().len(), 2);
    assert_ne!(doc["start"]["ordering"], doc["final"]["ordering"]);
}

#[test]
fn tuple_weight_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let t = "a=1;l0=2,0;lm=(2,1);lp=(1)";
    let doc = json(&run_with(&cache, &["tuple-weight", "--tuple", t, "--flavor", "bar", "--format", "json"]));
    let w = doc["weight"]["coeffs"].as_object().unwrap();
    let text: Vec<String> = w.iter().map(|(i, c)| format!("{i}:{c}")).collect();
    let weight = format!("level=1;{}", text.join(","));
    let back = json(&run_with(&cache, &["tuple-weight", "--weight", &weight, "--k", "2", "--flavor", "bar", "--format", "json"]));
    assert_eq!(back["tuple"], t);
}

#[test]
fn exit_codes_follow_the_error_taxonomy() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    assert_eq!(run_with(&cache, &["kl", "--x", "12", "--w", "3412"]).status.code(), Some(1));
    assert_eq!(run_with(&cache, &["kl", "--x", "1234"]).status.code(), Some(1));
    assert_eq!(run_with(&cache, &["char", "--tuple", "a=0;l0=;lm=();lp=()", "--depth", "99"]).status.code(), Some(1));
    assert_eq!(run_with(&cache, &["cb", "--m", "1", "--k", "1", "--n", "1", "--monomial", "w[0]|v[1]|w[1]", "--engine", "hecke"]).status.code(), Some(1));
    assert_eq!(run_with(&cache, &["--help"]).status.code(), Some(0));
}

#[test]
fn both_engines_agree_on_a_regular_block() {
    let dir = tempfile::tempdir().unwrap();
    for basis in ["canonical", "dual"] {
        let args = ["cb", "--m", "1", "--k", "2", "--n", "0", "--wedge", "v", "--monomial", "v[0]|v[1,2]|v[]", "--window", "0,2", "--engine", "both", "--basis", basis, "--format", "json"];
        let doc = json(&run_with(&dir.path().join("c.json"), &args));
        assert_eq!(doc["monomials"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn output_is_deterministic_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let jobs: [&[&str]; 3] = [
        &["kl", "--x", "1324", "--w", "3412", "--format", "json"],
        &["cb", "--m", "1", "--k", "1", "--n", "1", "--monomial", "w[0]|v[1]|w[1]", "--window", "-1,2", "--format", "json"],
        &["char", "--tuple", "a=0;l0=1;lm=(1);lp=(1)", "--flavor", "bar", "--depth", "3", "--format", "json"],
    ];
    for args in jobs {
        let cold = run_with(&cache, args);
        let warm = run_with(&cache, args);
        let uncached = run_with(&cache, &[args, &["--no-cache"]].concat());
        assert!(cold.status.success());
        assert_eq!(cold.stdout, warm.stdout, "{args:?}");
        assert_eq!(cold.stdout, uncached.stdout, "{args:?}");
    }
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(file["schema-version"], 1);
    assert_eq!(file["entries"].as_object().unwrap().len(), 2);
}

#[test]
fn stale_cache_is_ignored_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    std::fs::write(&cache, r#"{"schema-version": 0, "entries": {"kl:1234:3412": {"0": 7}}}"#).unwrap();
    let out = run_with(&cache, &["kl", "--x", "1234", "--w", "3412"]);
    assert_eq!(stdout(&out), "1+q\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema version"));
}

#[test]
fn truncation_cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(
        &dir.path().join("c.json"),
        &["truncate", "--tuple", "a=0;l0=1;lm=(1);lp=(1)", "--flavor", "bar", "--m", "1", "--n", "1", "--depth", "3", "--engine", "both", "--format", "json"],
    );
    assert!(!json(&out)["terms"].as_array().unwrap().is_empty());
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn torwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torwave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn manifest(dir: &Path) -> Value {
    let text = std::fs::read_to_string(dir.join("manifest.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn hashes(dir: &Path) -> Vec<(String, String)> {
    manifest(dir)["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| (o["file"].as_str().unwrap().to_string(), o["sha256"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn schema_prints_json() {
    let o = torwave(&["--schema"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["scan3"]["records.csv"]["normalized_gap"].is_string());
    assert!(v["manifest.json"].is_object());
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    assert_eq!(code(&torwave(&[])), 2);
}

#[test]
fn bad_config_files_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let o = torwave(&["lemma1", "--config", cfg.to_str().unwrap(), "--out", out]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));

    std::fs::write(&cfg, "a = [\n").unwrap();
    assert_eq!(code(&torwave(&["lemma1", "--config", cfg.to_str().unwrap(), "--out", out])), 2);

    let missing = tmp.path().join("nope.toml");
    assert_eq!(code(&torwave(&["lemma1", "--config", missing.to_str().unwrap(), "--out", out])), 2);
}

#[test]
fn invalid_parameters_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    let o = torwave(&["sweep", "--epsilons", "0.4,0.2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn scan_budget_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("b");
    let o = torwave(&["scan3", "--max-high", "64", "--max-evaluations", "10", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn scan3_manifest_hashes_match_and_config_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let o = torwave(&["scan3", "--max-high", "32", "--kappa", "0.75", "--out", first.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let m = manifest(&first);
    assert_eq!(m["subcommand"], "scan3");
    assert_eq!(m["status"], "ok");
    assert_eq!(m["config"]["kappa"], 0.75);
    assert!(m["knobs"]["energy_constant"].is_number());
    for o in m["outputs"].as_array().unwrap() {
        let bytes = std::fs::read(first.join(o["file"].as_str().unwrap())).unwrap();
        assert_eq!(o["bytes"].as_u64().unwrap(), bytes.len() as u64);
        assert_eq!(o["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
    }
    let records = std::fs::read_to_string(first.join("records.csv")).unwrap();
    assert!(records.starts_with("shell,signs,frequencies,phase,weight,normalized_gap"));

    // Rerun from the echoed config alone.
    let second = tmp.path().join("second");
    let echo = first.join("config.toml");
    let o = torwave(&["scan3", "--config", echo.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(manifest(&second)["config"], m["config"]);
    assert_eq!(hashes(&second), hashes(&first));
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("m.toml");
    std::fs::write(&cfg, "j_min = 5\nj_max = 7\ncutoff = 12\n").unwrap();
    let out = tmp.path().join("m");
    let o = torwave(&["measure", "--config", cfg.to_str().unwrap(), "--j-max", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let m = manifest(&out);
    assert_eq!(m["config"]["j_max"], 6);
    assert_eq!(m["config"]["cutoff"], 12);
    let csv = std::fs::read_to_string(out.join("measure.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn lemma1_profile() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("l");
    let o = torwave(&["lemma1", "--a", "1", "--b", "1", "--c", "1.9", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let p: Value = serde_json::from_str(&std::fs::read_to_string(out.join("profile.json")).unwrap()).unwrap();
    assert!(p["length"].as_f64().unwrap() <= p["length_bound"].as_f64().unwrap());
}

#[test]
fn simulate_writes_trajectory_and_is_thread_independent() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let out = tmp.path().join(name);
        let o = torwave(&[
            "--threads", threads, "simulate", "--grid", "16", "--t-end", "0.5", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let one = run("1", "one");
    let four = run("4", "four");

    let traj = std::fs::read_to_string(one.join("trajectory.jsonl")).unwrap();
    let first: Value = serde_json::from_str(traj.lines().next().unwrap()).unwrap();
    assert_eq!(first["t"], 0.0);
    assert!(traj.lines().count() >= 2);
    assert_eq!(manifest(&one)["threads"], 1);
    assert_eq!(hashes(&one), hashes(&four));
}

#[test]
fn sweep_writes_fit_footer() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sw");
    let o = torwave(&[
        "sweep", "--grid", "16", "--t-end", "5", "--epsilons", "0.4,0.2,0.1", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let footer = csv.lines().last().unwrap();
    assert!(footer.starts_with("# p_fit="), "{footer}");
    assert!(footer.contains("p_interval=["));
}

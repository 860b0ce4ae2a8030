use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ftrl-bandits"))
}

#[test]
fn run_writes_csvs_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let out = dir.path().join("out");
    fs::write(
        &config,
        serde_json::json!({
            "policy": {"kind": "hybrid_inf_anytime", "q": 1.0},
            "environment": {"kind": "stochastic_bernoulli", "means": [0.4, 0.6]},
            "horizons": [100, 200, 400],
            "replications": 5,
            "master_seed": 3,
            "output": out
        })
        .to_string(),
    )
    .unwrap();
    let result = bin().arg("run").arg(&config).output().unwrap();
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&result.stdout).unwrap();
    assert_eq!(summary["policy"], "hybrid_inf_anytime");
    assert_eq!(summary["horizons"].as_array().unwrap().len(), 3);
    let runs = fs::read_to_string(out.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().next().unwrap(), "seed,n,k,policy,env,random_regret,best_arm_loss");
    assert_eq!(runs.lines().count(), 16);
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"policy":{"kind":"exp3_fixed"},"environment":{"kind":"variance_adversary","alpha":0.2},"horizons":[64,32],"replications":2}"#,
    )
    .unwrap();
    let result = bin().arg("run").arg(&config).output().unwrap();
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("horizons[1]"));
}

#[test]
fn sweep_writes_combined_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    let out = dir.path().join("sweep");
    fs::write(
        &config,
        serde_json::json!({
            "base": {
                "policy": {"kind": "inf_fixed"},
                "environment": {"kind": "variance_adversary", "alpha": 0.1},
                "horizons": [16, 64, 256],
                "replications": 4
            },
            "parameters": {"/environment/alpha": [0.1, 0.25, 0.5]},
            "output": out
        })
        .to_string(),
    )
    .unwrap();
    let result = bin().arg("sweep").arg(&config).output().unwrap();
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let table = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 3 * 3);
    assert!(out.join("combo_2/summary.csv").exists());
}

#[test]
fn verify_subset_reports_each_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let result = bin()
        .args(["verify", "--only", "2,3,9,13", "--output"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    for id in [" 2 ", " 3 ", " 9 ", "13 "] {
        assert!(stdout.lines().any(|l| l.starts_with("[PASS]") && l.contains(id)), "{stdout}");
    }
    assert!(dir.path().join("criteria.csv").exists());
    let bad = bin().args(["verify", "--only", "99", "--output"]).arg(dir.path()).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

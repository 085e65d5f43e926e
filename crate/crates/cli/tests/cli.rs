use std::process::{Command, Output};

use ivar_core::catalog::MapDescriptor;
use serde_json::Value;

fn ivar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn periods_of(entry: &Value) -> Vec<u64> {
    entry["periods"]
        .as_array()
        .expect("periods array")
        .iter()
        .map(|p| p.as_u64().expect("integer period"))
        .collect()
}

#[test]
fn list_shows_lv3_periods() {
    let o = ivar(&["list"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("lv3 "))
        .expect("lv3 listed")
        .to_string();
    assert!(line.contains("{2,3,4,5}"), "{line}");
}

#[test]
fn list_qrt_periods() {
    let o = ivar(&["list", "--map", "qrt", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(periods_of(&entries[0]), vec![3, 4, 5]);
}

#[test]
fn list_json_round_trips_through_loader() {
    let o = ivar(&["list", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 9);
    for e in entries {
        let d: MapDescriptor = serde_json::from_value(e["descriptor"].clone()).unwrap();
        let map = d.load().unwrap();
        assert_eq!(map.descriptor(), d, "{}", d.name);
        assert_eq!(e["dim"].as_u64().unwrap() as usize, map.dim());
    }
    let lv3 = entries.iter().find(|e| e["name"] == "lv3").unwrap();
    assert_eq!(periods_of(lv3), vec![2, 3, 4, 5]);
}

#[test]
fn verify_lyness5_thousand_seeds() {
    let o = ivar(&["verify", "--map", "lyness5", "--period", "5", "--seeds", "1000"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["residual_summary"]["passed"], 1000);
    assert!(v["residual_summary"]["max_return_error"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_lyness_wrong_period_fails() {
    let o = ivar(&["verify", "--map", "lyness5", "--period", "4", "--seeds", "5"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_lv3_period3() {
    let o = ivar(&["verify", "--map", "lv3", "--period", "3", "--seeds", "100", "--tol", "1e-9"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 100);
    assert!(!v["config"]["generator"].as_array().unwrap().is_empty());
}

#[test]
fn verify_lv3_off_variety_finds_no_returns() {
    let o = ivar(&["verify", "--map", "lv3", "--period", "3", "--off-variety", "--seeds", "30"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["residual_summary"]["returns_found"], 0);
    for verdict in v["verdicts"].as_array().unwrap() {
        assert_eq!(verdict["kind"], "exclusivity");
        assert!(verdict["returns"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_qrt_random_parameters() {
    let o = ivar(&["verify", "--map", "qrt", "--period", "3", "--seeds", "5", "--tol", "1e-8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn eliminate_moebius_f4_matches_fixture() {
    let o = ivar(&[
        "eliminate", "--map", "moebius2d", "--period", "4", "--a", "1", "--b", "2", "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["fixture_match"], true);
    // (x+1)²X² + 2x(2x+3)X + ... at a = 1, b = 2, expanded
    assert_eq!(
        verdict["polynomials"][0],
        "4*x^2*X^2 + 8*x^2*X + 4*x*X^2 + x^2 + 12*x*X + X^2 + 2*x + 4*X + 1"
    );
}

#[test]
fn eliminate_lv3_period2() {
    let o = ivar(&["eliminate", "--map", "lv3", "--period", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("x*X - x - X"), "{out}");
    assert!(out.contains("y*Y - y - Y"), "{out}");
}

#[test]
fn orbit_lyness8_two_cycles() {
    let o = ivar(&["orbit", "--map", "lyness8", "--init", "1,1,1", "--steps", "16"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let firsts: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let cycle = [1.0, 3.0, 5.0, 9.0, 5.0, 3.0, 1.0, 1.0];
    assert_eq!(firsts.len(), 17);
    for (k, x) in firsts.iter().enumerate() {
        assert_eq!(*x, cycle[k % 8], "step {k}");
    }
}

#[test]
fn orbit_json_carries_exact_iterates() {
    let o = ivar(&["orbit", "--map", "lyness5", "--init", "2,1/3", "--steps", "5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let exact = v["exact"].as_array().unwrap();
    assert_eq!(exact.len(), 6);
    assert_eq!(exact[0], exact[5]);
}

#[test]
fn sample_points_lie_on_variety() {
    let o = ivar(&["sample", "--map", "lv3", "--period", "4", "--seeds", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["residual_summary"]["max_membership"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify", "--map", "lv3", "--period", "4", "--seeds", "10", "--seed", "7"];
    let a = ivar(&args);
    let b = ivar(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["wall_time_ms"], 0);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ivar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = ivar(&[
        "verify", "--map", "lyness2", "--period", "2", "--seeds", "3", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["config"]["params"]["a"], "1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--map", "nosuch", "--period", "3"],
        vec!["verify", "--map", "lv3", "--period", "7"],
        vec!["verify", "--map", "lv3", "--period", "3", "--tol", "-1"],
        vec!["verify", "--map", "lv3", "--period", "3", "--seeds", "0"],
        vec!["verify", "--map", "lv3", "--period", "3", "--a", "2"],
        vec!["verify", "--map", "qrt", "--period", "3", "--qp", "1,2,3"],
        vec!["verify", "--map", "lyness5", "--period", "5", "--off-variety"],
        vec!["orbit", "--map", "lyness5", "--init", "1"],
        vec!["orbit", "--map", "lyness5", "--init", "1,abc"],
        vec!["sample", "--map", "lyness5", "--period", "5"],
        vec!["verify", "--map", "lv3"],
        vec!["frobnicate"],
    ] {
        let o = ivar(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn msbarrier(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_msbarrier"));
    for (key, _) in std::env::vars() {
        if key.starts_with("MSB_") {
            cmd.env_remove(key);
        }
    }
    cmd.args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn records(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

fn column(text: &str, name: &str) -> Vec<String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let idx = rdr.headers().unwrap().iter().position(|h| h == name).expect("column present");
    rdr.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

fn error_kind(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).expect("JSON error on stderr");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn price_scenario() {
    let scenario = fixture("type1_up.toml");
    let out = msbarrier(&["price", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(column(&text, "option"), ["UOC", "UIC", "UOP", "UIP"]);
    assert_eq!(column(&text, "price_4dp")[0], "0.6654");
    let price: Vec<f64> = column(&text, "price_full").iter().map(|v| v.parse().unwrap()).collect();
    let vanilla: Vec<f64> = column(&text, "vanilla").iter().map(|v| v.parse().unwrap()).collect();
    assert!((price[0] + price[1] - vanilla[0]).abs() < 1e-4);
    assert!((price[2] + price[3] - vanilla[2]).abs() < 1e-4);
}

#[test]
fn unmonitored_probability_is_a_plain_gaussian_cdf() {
    let scenario = fixture("plain_mvn.toml");
    let out = msbarrier(&["prob", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let got: f64 = column(&text, "probability_full")[0].parse().unwrap();
    let (mu, sigma) = (0.01, 0.25);
    let a = (1.05f64.ln() - mu * 0.4) / (sigma * 0.4f64.sqrt());
    let b = (1.1f64.ln() - mu) / sigma;
    let want = common::cdf2(a, b, 0.4f64.sqrt());
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    assert_eq!(column(&text, "monitored_steps")[0], "0");
}

#[test]
fn monte_carlo_subcommand() {
    let scenario = fixture("type1_up.toml");
    let out = msbarrier(&["mc", "--scenario", scenario.to_str().unwrap(), "--paths", "100000", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(records(&text).len(), 4);
    assert!(column(&text, "paths").iter().all(|p| p == "100000"));
    for (a, (m, se)) in column(&text, "analytic").iter().zip(column(&text, "mc").iter().zip(column(&text, "se"))) {
        let (a, m, se): (f64, f64, f64) = (a.parse().unwrap(), m.parse().unwrap(), se.parse().unwrap());
        assert!((a - m).abs() < 5.0 * se, "{a} vs {m} (se {se})");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("RMS relative MC error"));
}

#[test]
fn curve_subcommand_lists_levels_survival_and_prices() {
    let scenario = fixture("exp_curve.toml");
    let out = msbarrier(&["curve", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let items = column(&stdout(&out), "item");
    assert_eq!(items.iter().filter(|i| *i == "level").count(), 8);
    assert_eq!(items[8], "survival");
    assert_eq!(items[9], "UOP K=100");

    let left = msbarrier(&["curve", "--scenario", scenario.to_str().unwrap(), "--rule", "left"]);
    let first = |o: &Output| column(&stdout(o), "level")[0].parse::<f64>().unwrap();
    assert!((first(&left) - 105.0).abs() < 1e-9);
}

#[test]
fn reproduce_quantile_table_without_simulation() {
    let out = msbarrier(&["reproduce", "ex4", "--paths", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(records(&text).len(), 27);
    assert!(column(&text, "pass").iter().all(|p| p == "true"));
    assert!(column(&text, "mc").iter().all(|m| m.is_empty()));
}

#[test]
fn reproduced_table_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("4b.csv");
    let out = msbarrier(&["reproduce", "--table", "4b", "--paths", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\r\n"));
    let rows = records(&text);
    assert_eq!(rows.len(), 48);
    let full = column(&text, "analytic_full");
    let shown = column(&text, "analytic_4dp");
    let expected = column(&text, "expected");
    for ((f, s), e) in full.iter().zip(&shown).zip(&expected) {
        let v: f64 = f.parse().unwrap();
        assert_eq!(format!("{v:.4}"), *s);
        assert!((v - e.parse::<f64>().unwrap()).abs() <= 5e-5 + 1e-12);
    }
}

#[test]
fn output_is_deterministic() {
    let scenario = fixture("type1_up.toml");
    let run = || msbarrier(&["mc", "--scenario", scenario.to_str().unwrap(), "--paths", "20000", "--seed", "17"]).stdout;
    assert_eq!(run(), run());
    let other = msbarrier(&["mc", "--scenario", scenario.to_str().unwrap(), "--paths", "20000", "--seed", "18"]).stdout;
    assert_ne!(run(), other);
}

#[test]
fn errors_are_reported_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[market]\nspot = 100\nrate = 0.03\nvol = -0.2\n[grid]\nsteps = 2\nmaturity = 1\n").unwrap();
    let out = msbarrier(&["prob", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    error_kind(&out);

    let out = msbarrier(&["reproduce", "9z", "--paths", "0"]);
    assert_eq!(out.status.code(), Some(2));
    error_kind(&out);

    let out = msbarrier(&["price"]);
    assert_eq!(out.status.code(), Some(2));

    let out = msbarrier(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "usage");
}

#[test]
fn wrong_rule_misses_tolerances() {
    let out = msbarrier(&["reproduce", "ex4", "--paths", "0", "--rule", "left"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(column(&stdout(&out), "pass").iter().any(|p| p == "false"));
}

#[test]
fn environment_supplies_defaults() {
    let scenario = fixture("type1_up.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_msbarrier"))
        .arg("price")
        .env("MSB_SCENARIO", &scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(&stdout(&out), "price_4dp")[0], "0.6654");
}

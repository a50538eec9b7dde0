use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn mfdfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfdfa"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn synth_then_analyze_then_compare() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    let run = dir.path().join("run");
    let o = mfdfa(&["synth", "fgn", "--n", "2048", "--hurst", "0.7", "--synth-seed", "3", "--out", p(&csv)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let o = mfdfa(&["analyze", "--input", p(&csv), "--surrogates", "6", "--seed", "1", "--out", p(&run)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("verdict:"));
    assert!(stdout.contains("Order comparison"));
    assert!(run.join("order2").join("spectrum.csv").exists());

    let o = mfdfa(&["compare", p(&run), "--out", p(&dir.path().join("cmp"))]);
    assert!(o.status.success());
    assert!(dir.path().join("cmp").join("comparison.csv").exists());
}

#[test]
fn exit_codes_follow_error_kind() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("o");

    let o = mfdfa(&["analyze", "--synth", "white-noise", "--n", "2048", "--surrogates", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = mfdfa(&["analyze", "--synth", "white-noise", "--detrend-order", "3", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));

    let missing = dir.path().join("missing.csv");
    let o = mfdfa(&["analyze", "--input", p(&missing), "--surrogates", "4", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.csv"));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "date,value\n2000-01-01,1\n2000-01-02,-4\n").unwrap();
    let o = mfdfa(&["spectrum", "--input", p(&bad), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3));

    // constant prices: every box of the profile is flat
    let flat = dir.path().join("flat.csv");
    let mut text = String::from("date,value\n");
    for d in 0..2000 {
        text.push_str(&format!("{},5\n", chrono_like_date(d)));
    }
    std::fs::write(&flat, text).unwrap();
    let o = mfdfa(&["spectrum", "--input", p(&flat), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

fn chrono_like_date(day: usize) -> String {
    format!("{:04}-{:02}-{:02}", 2000 + day / 336, day / 28 % 12 + 1, day % 28 + 1)
}

#[test]
fn environment_supplies_defaults() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_mfdfa"))
        .args(["spectrum", "--synth", "white-noise", "--n", "4096"])
        .env("MFDFA_OUT", &out)
        .env("MFDFA_DETREND_ORDER", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("order2").join("summary.json").exists());
    assert!(!out.join("order1").exists());
}

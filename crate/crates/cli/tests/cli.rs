use serde_json::Value;
use std::process::{Command, Output};

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn mhs_example() {
    let out = mzv(&["mhs", "--p", "5", "--m", "5", "--word", "(1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "125/12");
}

#[test]
fn mhs_unweighted_depth_two() {
    // sum_{0<a<b<5} 1/(a b) = 35/24
    let out = mzv(&["mhs", "--m", "5", "--word", "(1,1)", "--unweighted"]);
    assert_eq!(json(&out)["value"], "35/24");
}

#[test]
fn stuffle_example_exits_zero() {
    let out = mzv(&["verify", "stuffle", "--p", "3", "--max-m", "50", "--max-weight", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert!(v["checks"].as_array().unwrap().len() > 100);
}

#[test]
fn zeta_example_certificate() {
    let out = mzv(&["zeta", "--p", "3", "--k", "3", "--alpha0", "1", "--precision", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["cert"].as_i64().unwrap() >= 8);
    assert_eq!(v["index"]["k"], 3);
    assert_eq!(v["word"], "e0^2 e1");
}

#[test]
fn zeta_table_even_values_vanish() {
    let out = mzv(&["zeta", "--p", "3", "--weight-cap", "4", "--precision", "6"]);
    let v = json(&out);
    let rows = v["zeta"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let k = r["index"]["k"].as_u64().unwrap();
        // A zero p-adic value has no unit digits.
        assert_eq!(r["value"]["unit"].as_array().unwrap().is_empty(), k % 2 == 0, "k = {k}");
    }
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["mhs", "--p", "4", "--m", "5", "--word", "(1)"],
        vec!["mhs", "--p", "3", "--N", "3", "--m", "5", "--word", "(1)"],
        vec!["zeta", "--k", "3", "--precision", "0"],
        vec!["verify", "group", "--weight-cap", "0"],
        vec!["mhs", "--m", "5", "--word", "(0)"],
        vec!["zeta", "--k", "1"],
        vec!["verify", "no-such-suite"],
    ] {
        let out = mzv(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn failing_check_exits_one_and_is_named() {
    // Three samples that no constant fits.
    let dir = std::env::temp_dir().join(format!("mzv-fit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    std::fs::write(&path, r#"[{"a":1,"value":"1"},{"a":2,"value":"2"},{"a":3,"value":"7"}]"#).unwrap();
    let out = mzv(&["fit", "--input", path.to_str().unwrap(), "--base", "3", "--n-max", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inconsistent"));
}

#[test]
fn fit_recovers_polynomial() {
    // 2 + 3^a + a 3^a
    let dir = std::env::temp_dir().join(format!("mzv-fit2-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let samples: Vec<Value> = (1..=6i64)
        .map(|a| serde_json::json!({"a": a, "value": (2 + 3i64.pow(a as u32) * (1 + a)).to_string()}))
        .collect();
    std::fs::write(&path, serde_json::to_string(&samples).unwrap()).unwrap();
    let out = mzv(&["fit", "--input", path.to_str().unwrap(), "--base", "3", "--n-max", "1", "--m-cap", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let terms = json(&out)["expansion"]["terms"].as_array().unwrap().clone();
    let nonzero: Vec<(i64, i64)> = terms
        .iter()
        .filter(|t| t["coeff"]["coords"][0] != "0")
        .map(|t| (t["n"].as_i64().unwrap(), t["m"].as_i64().unwrap()))
        .collect();
    assert_eq!(nonzero, vec![(0, 0), (1, 0), (1, 1)]);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "group", "--samples", "4", "--weight-cap", "4", "--seed", "17"];
    let (a, b) = (mzv(&args), mzv(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = ["ihara", "random", "--weight-cap", "3", "--depth-cap", "2", "--seed", "5"];
    assert_eq!(mzv(&args).stdout, mzv(&args).stdout);
}

#[test]
fn ihara_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("mzv-ihara-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g = dir.join("g.json");
    let series = json(&mzv(&["ihara", "random", "--weight-cap", "4", "--depth-cap", "2", "--seed", "1"]))["series"].clone();
    std::fs::write(&g, series.to_string()).unwrap();
    let inv = json(&mzv(&["ihara", "inv", "--g", g.to_str().unwrap()]))["series"].clone();
    let gi = dir.join("gi.json");
    std::fs::write(&gi, inv.to_string()).unwrap();
    let prod = json(&mzv(&["ihara", "mul", "--g", g.to_str().unwrap(), "--f", gi.to_str().unwrap()]))["series"].clone();
    let terms = prod["terms"].as_array().unwrap();
    let nonzero: Vec<&Value> = terms.iter().filter(|t| t["coeff"]["coords"][0] != "0").collect();
    assert_eq!(nonzero.len(), 1, "g o g^-1 should be 1: {prod}");
    assert_eq!(nonzero[0]["word"], "");
}

#[test]
fn text_format() {
    let out = mzv(&["--format", "text", "mhs", "--m", "5", "--word", "(1)"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("value: 125/12"));
}

#[test]
fn iter_series_matches_brute() {
    let out = mzv(&["iter-series", "--p", "3", "--word", "(1,2)", "--alpha", "2", "--precision", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "pass");
}

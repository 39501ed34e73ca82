use std::path::PathBuf;
use std::process::{Command, Output};

fn klrvv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klrvv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_config(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("klrvv-cli-{}-{name}.toml", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn normal_form_text() {
    let o = klrvv(&["--case", "A2", "--nu", "q", "nf", "pi^2*e(q)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x1*e(q)");
    let o = klrvv(&["--case", "A2", "--nu", "q", "nf", "pi^2*e(q^-1)"]);
    assert_eq!(stdout(&o).trim(), "-x1*e(q^-1)");
}

#[test]
fn product_json() {
    let o = klrvv(&["--case", "A1", "--nu", "l", "--format", "json", "mul", "x1*e(l)", "x1*e(l)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["text"], "x1^2*e(l)");
    assert_eq!(v["terms"][0]["coeff"], "1");
}

#[test]
fn parse_errors_exit_with_two() {
    let o = klrvv(&["--case", "A1", "--nu", "l + p2*l", "nf", "x0*e(l,p2*l)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("start at 1"));
    assert_eq!(klrvv(&["--case", "A1", "--nu", "l", "verify", "bogus"]).status.code(), Some(2));
    assert_eq!(klrvv(&["--nu", "l", "dim"]).status.code(), Some(2));
    assert_ne!(klrvv(&["--case", "A1", "--nu", "l", "--format", "yaml", "dim"]).status.code(), Some(0));
}

#[test]
fn verification_exit_codes() {
    let o = klrvv(&["--case", "A2", "--nu", "q + p2*q", "verify", "morita:phi_mult_one"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("pass"));
    let o = klrvv(&["--case", "separated(A2,A3)", "--nu", "q + p", "verify", "all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("skipped(hypothesis)"));
    // balance a2 fails for the orbit of q
    let o = klrvv(&["--case", "A2", "--nu", "q", "--format", "json", "verify", "morita:phi_kz_q"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.iter().all(|n| n.contains("balance a2")), "{failed:?}");
}

#[test]
fn toml_config_and_overrides() {
    let path = temp_config("ok", "case = \"A1\"\nnu = \"l + p2*l + p4*l\"\ncap = 6\nseed = 5\n");
    let o = klrvv(&["--config", path.to_str().unwrap(), "--format", "json", "dim"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cap"], 6);
    let o = klrvv(&["--config", path.to_str().unwrap(), "--cap", "4", "--format", "json", "dim"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cap"], 4);

    let list = temp_config("list", "case = \"A1\"\nnu = [[\"l\", 2], [\"p2*l\", 1]]\n");
    assert_eq!(klrvv(&["--config", list.to_str().unwrap(), "verify", "relations"]).status.code(), Some(0));

    let bad = temp_config("bad", "case = \"A1\"\nnu = \"l\"\ncolour = 3\n");
    let o = klrvv(&["--config", bad.to_str().unwrap(), "dim"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("configuration error"));
    for p in [path, list, bad] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn root_partitions_listing() {
    let o = klrvv(&["--case", "A1", "--nu", "l + p2*l + p4*l + p6*l", "--format", "json", "roots"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.iter().filter(|r| r["side"] == "+").count(), 8);
    assert_eq!(rows.len(), 16);
}

#[test]
fn same_seed_same_output() {
    let args = ["--case", "A1", "--nu", "l + p2*l", "--seed", "9", "--format", "json", "verify", "relations"];
    assert_eq!(klrvv(&args).stdout, klrvv(&args).stdout);
}

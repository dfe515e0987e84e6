//! The `waki` binary: exit codes, golden build outputs, deterministic reports.
//!
//! Set `WAKI_BLESS=1` to rewrite the golden files.

mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

const GOLDEN: [&str; 8] =
    ["sl2_untwisted", "sl2_twisted_n2", "sl2_twisted_n3", "sl2_twisted_n4", "sl3_inner", "sl4_nu", "sl4_mu", "sl4_b20"];

fn waki(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waki")).args(args).env_remove("WAKI_SEED").output().unwrap()
}

fn cfg(name: &str) -> String {
    common::config_path(name).to_string_lossy().into_owned()
}

fn tmp_config(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("waki-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(format!("{name}.json"))
}

#[test]
fn build_outputs_match_goldens() {
    let bless = std::env::var("WAKI_BLESS").is_ok();
    for name in GOLDEN {
        let out = waki(&["build", "--config", &cfg(name)]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        let path = golden_path(name);
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        assert!(text == want, "{name}: build output differs from {}", path.display());
    }
}

#[test]
fn build_json_shape() {
    let out = waki(&["build", "--config", &cfg("sl2_twisted_n2"), "--level", "5/7"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["level"], "5/7");
    assert_eq!(v["dim"], 3);
    assert_eq!(v["order"], 2);
    assert_eq!(v["currents"].as_array().unwrap().len(), 3);
    assert_eq!(v["twisted_currents"].as_array().unwrap().len(), 3);
    let latex = waki(&["build", "--config", &cfg("sl2_untwisted"), "--format", "latex"]);
    assert!(latex.status.success());
    assert!(String::from_utf8_lossy(&latex.stdout).contains("\\mathcal{J}_{D1}"));
}

#[test]
fn export_writes_file() {
    let dir = std::env::temp_dir().join(format!("waki-export-{}", std::process::id()));
    let out = waki(&["export", "--config", &cfg("sl2_untwisted"), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.join("sl2_untwisted.json")).unwrap();
    assert_eq!(text, std::fs::read_to_string(golden_path("sl2_untwisted")).unwrap());
}

#[test]
fn config_errors_exit_2() {
    let bad = tmp_config("bad.toml", "name = \"x\"\nlevel = 1\nalgebra = { preset = \"sl\", n = 2 }\ngrading = { h = \"principal\" }\nbogus = 1\n");
    let out = waki(&["build", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
    assert_eq!(waki(&["build", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(waki(&["build", "--config", &cfg("sl2_untwisted"), "--level", "x"]).status.code(), Some(2));
    assert_eq!(waki(&["build", "--config", &cfg("sl2_untwisted"), "--split", "sideways"]).status.code(), Some(2));
    assert_eq!(waki(&["verify", "--config", &cfg("sl2_untwisted"), "--level=-2"]).status.code(), Some(2));
    assert_eq!(waki(&["verify", "--config", &cfg("sl2_untwisted"), "--modes", "3..1"]).status.code(), Some(2));
    assert_eq!(waki(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(waki(&["--help"]).status.code(), Some(0));
}

#[test]
fn incompatible_pair_exits_3() {
    let inc = tmp_config(
        "inc.toml",
        "name = \"inc\"\nlevel = 1\nalgebra = { preset = \"sl\", n = 3 }\nautomorphism = { kind = \"secondary_diagonal\" }\ngrading = { h = [2, -1, -1] }\n",
    );
    let out = waki(&["build", "--config", &inc]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_is_deterministic_and_mutations_fail() {
    let args = ["verify", "--config", &cfg("sl2_twisted_n2"), "--modes", "-1..1", "--cutoff", "2", "--level", "1"];
    let a = waki(&args);
    let b = waki(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v.get("timings_ms").is_none());

    let mut m: Vec<&str> = args.to_vec();
    m.extend(["--mutate-theta", "3", "--fail-fast"]);
    let out = waki(&m);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);

    let mut m: Vec<&str> = args.to_vec();
    m.extend(["--mutate-lambda", "1,2"]);
    assert_eq!(waki(&m).status.code(), Some(1));

    let mut m: Vec<&str> = args.to_vec();
    m.extend(["--mutate-theta", "9"]);
    assert_eq!(waki(&m).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = waki(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

use std::path::PathBuf;
use std::process::Command;

use charsums_verify::output::read_csv;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_charsums-verify"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

#[test]
fn shipped_configs_pass() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "odd_cubic_f7.json",
        "cubic_f13_order3.json",
        "trans_add_grid_f13.json",
        "hom_mult_f13.json",
    ] {
        let out = dir.path().join(name.replace(".json", ".csv"));
        let status = bin()
            .arg("run")
            .arg(config(name))
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success(), "{name}");
        let rows = read_csv(std::fs::File::open(&out).unwrap()).unwrap();
        assert!(!rows.is_empty());
        for row in &rows {
            assert!(row.ok(), "{name}: {row:?}");
            assert_eq!(row.recompute_flags(), (row.pass_weil, row.pass_improved));
        }
    }
}

#[test]
fn zero_time_output_is_reproducible_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(format!("w{workers}.csv"));
        let status = bin()
            .args(["run", "--zero-time", "--workers", workers, "--out"])
            .arg(&out)
            .arg(config("trans_add_grid_f13.json"))
            .status()
            .unwrap();
        assert!(status.success());
        bytes.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn json_output_round_trips_the_kind() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.json");
    let status = bin()
        .arg("run")
        .arg(config("odd_cubic_f7.json"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let kinds: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds.len(), 4);
    assert_eq!(kinds[1], "TransAddSpExc");
}

#[test]
fn invalid_config_exits_with_2_and_names_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"version": 1, "kind": "trans-mult", "p": 12, "r": [3, 1], "poly": {"random": {}}}"#,
    )
    .unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("p") && err.contains("seed"), "{err}");
}

#[test]
fn gen_prints_a_split_cubic() {
    let out = bin()
        .args(["gen", "p=13,d=3,splits,roots_sum_zero", "--seed", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim().split(',').count(), 4);
}

#[test]
fn identity_subcommand_reports() {
    let out = bin().args(["check-identity", "gauss"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("gauss:"));
}

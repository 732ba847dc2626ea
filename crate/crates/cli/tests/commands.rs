use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hutchlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hutchlab"))
        .args(args)
        .env_remove("HUTCHLAB_MAX_CELLS")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn strip_times(v: &mut Value) {
    if let Some(records) = v["records"].as_array_mut() {
        for r in records {
            r.as_object_mut().unwrap().remove("wall_time_ms");
        }
    }
}

#[test]
fn doubling_exactness_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let run = hutchlab(&["analyze", "--system", "gallery:doubling", "--checks", "exactness", "--out", path_str(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let report = read_json(&out);
    assert_eq!(report["resolution"], 1024);
    let rec = &report["records"][0];
    assert_eq!(rec["property"], "exactness");
    assert_eq!(rec["verdict"], "proved-at-resolution");
    assert_eq!(rec["witness"]["escape_time_max"], 10);
    assert_eq!(rec["resolution"], 1024);

    let verify = hutchlab(&["verify", "--report", path_str(&out)]);
    assert_eq!(verify.status.code(), Some(0));

    // bump one escape time and the replay must notice
    let mut tampered = report.clone();
    tampered["records"][0]["witness"]["escape_times"][17] = 11.into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&tampered).unwrap()).unwrap();
    let verify = hutchlab(&["verify", "--report", path_str(&bad)]);
    assert_eq!(verify.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&verify.stdout).contains("exactness"));
}

#[test]
fn torus_refutation_at_four() {
    let run = hutchlab(&["analyze", "--system", "gallery:torus_shears", "--checks", "exactness", "--resolution", "4"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let report: Value = serde_json::from_slice(&run.stdout).unwrap();
    let rec = &report["records"][0];
    assert_eq!(rec["verdict"], "refuted-at-resolution");
    // (2,2), (2,0), (0,2) with index x*4 + y, reached from the open at (2,2)
    let idx = rec["witness"]["trapped_in"][10].as_u64().unwrap() as usize;
    let half = &rec["witness"]["certificates"][idx];
    assert_eq!(half["core"], serde_json::json!([2, 8, 10]));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let checks = "attractor,physical,proper-witness,exactness,mixing,chain,shadowing,equicontinuity,backward-orbit";
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let run = hutchlab(&[
            "analyze", "--system", "gallery:doubling", "--resolution", "128", "--checks", checks, "--rng-seed", "7",
            "--out", path_str(&out),
        ]);
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
        let verify = hutchlab(&["verify", "--report", path_str(&out)]);
        assert_eq!(verify.status.code(), Some(0), "{}", String::from_utf8_lossy(&verify.stdout));
        let mut v = read_json(&out);
        strip_times(&mut v);
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0]["parameters"]["rng_seed"], 7);
}

#[test]
fn export_then_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["toml", "json"] {
        let file = dir.path().join(format!("rot.{ext}"));
        let export = hutchlab(&["gallery", "export", "rotation_pair", path_str(&file)]);
        assert_eq!(export.status.code(), Some(0));
        let text = std::fs::read_to_string(&file).unwrap();
        assert!(text.contains("263/840"), "{text}");
        let run = hutchlab(&["analyze", "--system", path_str(&file), "--checks", "exactness,minimality"]);
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    }
}

#[test]
fn expectation_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rot.toml");
    std::fs::write(
        &file,
        r#"
[space]
kind = "circle"
resolution = 16

[[maps]]
name = "rotation"
params = { alpha = "1/16" }

[expected]
exactness = "proved"
"#,
    )
    .unwrap();
    let run = hutchlab(&["analyze", "--system", path_str(&file)]);
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn malformed_files_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    std::fs::write(&file, "[space]\nkind = \"circle\"\nresolution = 16\n\n[[maps]]\nname = \"warp\"\n").unwrap();
    let run = hutchlab(&["analyze", "--system", path_str(&file)]);
    assert_eq!(run.status.code(), Some(2));
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("line"), "{err}");

    let capped = Command::new(env!("CARGO_BIN_EXE_hutchlab"))
        .args(["analyze", "--system", "gallery:doubling", "--checks", "exactness"])
        .env("HUTCHLAB_MAX_CELLS", "512")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn gallery_list_and_trace_csv() {
    let list = hutchlab(&["gallery", "list"]);
    assert_eq!(list.status.code(), Some(0));
    let text = String::from_utf8_lossy(&list.stdout);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("chain_shadow"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let run = hutchlab(&[
        "analyze", "--system", "gallery:doubling", "--resolution", "64", "--checks", "attractor", "--horizon", "12",
        "--trace-csv", path_str(&csv),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let rows: Vec<String> = std::fs::read_to_string(&csv).unwrap().lines().map(String::from).collect();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0], "0,0.500000000000");
    assert!(rows[12].starts_with("12,"));
}

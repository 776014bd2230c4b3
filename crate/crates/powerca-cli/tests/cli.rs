//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_powerca"))
}

fn write(path: &Path, content: &str) {
    fs::write(path, content).unwrap();
}

fn sample_csv(dir: &Path) -> PathBuf {
    let path = dir.join("table.csv");
    write(&path, ",a,b,c,d\nr1,5,1,2,8\nr2,1,7,3,2\nr3,4,2,9,1\n");
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn ca_writes_report_and_map() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_csv(dir.path());
    let out = run(&[
        "ca",
        input.to_str().unwrap(),
        "--output-dir",
        dir.path().to_str().unwrap(),
        "--map",
        "axes=1,2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("2 axes retained"));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("table_ca_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["analysis"], "ca");
    assert_eq!(report["method"], "svd");
    assert_eq!(report["rows"], 3);
    assert_eq!(report["dispersions"].as_array().unwrap().len(), 2);

    let svg = fs::read_to_string(dir.path().join("table_ca_map.svg")).unwrap();
    assert!(svg.contains("r1") && svg.contains("d"));
}

#[test]
fn tca_csv_format_emits_three_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_csv(dir.path());
    let out = run(&[
        "tca",
        input.to_str().unwrap(),
        "--algorithm",
        "exhaustive",
        "--format",
        "csv",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for name in [
        "table_tca_dispersions.csv",
        "table_tca_row_coords.csv",
        "table_tca_col_coords.csv",
    ] {
        assert!(dir.path().join(name).exists(), "missing {name}");
    }
    let disp = fs::read_to_string(dir.path().join("table_tca_dispersions.csv")).unwrap();
    assert!(disp.starts_with("axis,delta,delta_squared,percent\n"));
}

#[test]
fn powered_analysis_matches_closed_form() {
    // 12x26 all-ones with one zero: ca --alpha 1e-4 must land on 1/312
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("z.csv");
    let mut body = String::new();
    for i in 0..12 {
        let mut row: Vec<String> = (0..26)
            .map(|j| {
                if i == 0 && j == 0 {
                    "0".into()
                } else {
                    "7".into()
                }
            })
            .collect();
        row.insert(0, format!("r{i}"));
        body.push_str(&row.join(","));
        body.push('\n');
    }
    write(&input, &body);
    let out = run(&[
        "ca",
        input.to_str().unwrap(),
        "--no-header",
        "--alpha",
        "1e-4",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("z_ca_report.json")).unwrap())
            .unwrap();
    let first = report["dispersions"][0]["delta_squared"].as_f64().unwrap();
    assert!((first - 1.0 / 312.0).abs() < 1e-5, "{first}");
}

#[test]
fn lemma2_reports_both_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "lemma2",
        "--zeros",
        "26",
        "--rows",
        "105",
        "--cols",
        "11",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0.022510823"), "{text}");
    assert!(text.contains("0.064457365"), "{text}");
    let doc: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("lemma2_m26_105x11.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc["reduced_table"][0][1].as_f64().unwrap(), 260.0);
}

#[test]
fn merge_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    write(&input, ",x,y,z\na,1,2,3\nb,2,4,6\nc,1,0,1\n");
    let out = run(&[
        "merge",
        input.to_str().unwrap(),
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("merged 3x3 -> 2x3"));
    let merged = fs::read_to_string(dir.path().join("m_merge_merged.csv")).unwrap();
    assert!(merged.contains("a+b"), "{merged}");

    let out = run(&[
        "stats",
        input.to_str().unwrap(),
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m_stats.json")).unwrap())
            .unwrap();
    assert_eq!(doc["zero_cells"], 1);
}

#[test]
fn converge_emits_monotone_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.csv");
    write(&input, ",x,y,z\na,3,17,4\nb,12,5,31\nc,7,9,1\n");
    let out = run(&[
        "converge",
        input.to_str().unwrap(),
        "--alphas",
        "1e-2,1e-3,1e-4",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c_converge.json")).unwrap())
            .unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let errs: Vec<f64> = rows
        .iter()
        .map(|r| r["max_err_lambda"].as_f64().unwrap())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn transform_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.csv");
    write(&input, ",x,y\na,4,9\nb,1,16\n");
    let out = run(&[
        "transform",
        input.to_str().unwrap(),
        "--kind",
        "power",
        "--alpha",
        "0.5",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("t_power.csv")).unwrap();
    assert_eq!(text, ",x,y\na,2,3\nb,1,4\n");

    let out = run(&[
        "transform",
        input.to_str().unwrap(),
        "--kind",
        "indicator",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("t_indicator.csv")).unwrap();
    assert_eq!(text, ",x,y\na,1,1\nb,1,1\n");
}

#[test]
fn exit_codes() {
    // validation: negative entry
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    write(&bad, "1,2\n-3,4\n");
    let out = run(&[
        "ca",
        bad.to_str().unwrap(),
        "--no-header",
        "--no-row-labels",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // validation: zero marginal
    let zero = dir.path().join("zero.csv");
    write(&zero, "0,0\n1,2\n");
    let out = run(&[
        "ca",
        zero.to_str().unwrap(),
        "--no-header",
        "--no-row-labels",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // numeric: balancing starved of iterations
    let pos = dir.path().join("pos.csv");
    write(&pos, ",x,y\na,2,7\nb,5,1\n");
    let out = bin()
        .args(["mfca", pos.to_str().unwrap(), "--max-iter", "1"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // io: missing file
    let out = run(&["ca", "/no/such/file.csv"]);
    assert_eq!(out.status.code(), Some(4));

    // clap usage error
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_csv(dir.path());
    for sub in ["a", "b"] {
        fs::create_dir_all(dir.path().join(sub)).unwrap();
        let out = run(&[
            "tca",
            input.to_str().unwrap(),
            "--output-dir",
            dir.path().join(sub).to_str().unwrap(),
            "--map",
            "axes=1,2",
        ]);
        assert!(out.status.success());
    }
    for name in ["table_tca_report.json", "table_tca_map.svg"] {
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn mmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmm"))
        .args(args)
        .env_remove("MMM_DEGREE_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn hilbert_row(label: &str, up_to: &str) -> String {
    let o = mmm(&[
        "hilbert",
        "--coefficients",
        label,
        "--max-degree",
        up_to,
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn hilbert_tables() {
    assert_eq!(hilbert_row("Q", "8"), "1,0,1,0,2,0,3,0,5");
    assert_eq!(hilbert_row("Htilde", "7"), "1,0,0,0,0,1,0,2");
    assert_eq!(hilbert_row("HtildeDual", "5"), "0,0,0,1,0,2");
    assert_eq!(hilbert_row("H", "7"), "0,1,0,2,0,4,0,7");
}

#[test]
fn hilbert_json_has_generator_report() {
    let o = mmm(&[
        "hilbert",
        "--coefficients",
        "Htilde",
        "--max-degree",
        "9",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"], "Htilde");
    assert_eq!(v["dims"]["9"], 5);
    assert_eq!(v["generator_report"]["0"], 1);
    assert_eq!(v["generator_report"]["5"], 1);
}

#[test]
fn unknown_label_is_a_usage_error() {
    let o = mmm(&["hilbert", "--coefficients", "Z"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn odd_bound_is_a_usage_error() {
    let o = mmm(&["verify-all", "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("even"));
}

#[test]
fn minimal_bound_passes() {
    let o = mmm(&["verify-all", "--max-degree", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degree_bound"], 2);
    assert!(v.get("timings").is_none());
}

#[test]
fn env_var_sets_the_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_mmm"))
        .args(["verify-all"])
        .env("MMM_DEGREE_BOUND", "6")
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degree_bound"], 6);
}

#[test]
fn timings_live_outside_the_checks() {
    let o = mmm(&[
        "verify-all",
        "--max-degree",
        "6",
        "--timings",
        "--jobs",
        "2",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["timings"]["tor_dimensions"].is_u64());
    for c in v["checks"].as_array().unwrap() {
        assert!(c.get("elapsed_ms").is_none());
        assert_eq!(c["status"], "pass");
    }
}

#[test]
fn report_formats_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let o = mmm(&[
        "verify-all",
        "--max-degree",
        "8",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("check_id,status,record,field,value"));
    assert!(csv.contains("generators_mij,pass,"));

    let text = stdout(&mmm(&[
        "verify-all",
        "--max-degree",
        "8",
        "--format",
        "text",
    ]));
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}

#[test]
fn h1_bundled_examples() {
    assert_eq!(stdout(&mmm(&["h1", &data("b3.json")])), "0\n");
    assert_eq!(
        stdout(&mmm(&["h1", &data("free_rank2_trivial.json")])),
        "2\n"
    );
    assert_eq!(stdout(&mmm(&["h1", &data("z2_sign.json")])), "0\n");
    let certified = stdout(&mmm(&[
        "h1",
        &data("b3.json"),
        "--certify",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&certified).unwrap();
    assert_eq!(v["h1_dim"], 0);
    assert_eq!(v["cocycles"].as_array().unwrap().len(), 2);
    assert_eq!(v["coboundaries"].as_array().unwrap().len(), 2);
}

#[test]
fn h1_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // σ1 σ2 σ1 = σ2 σ1 σ2 fails for these images
    std::fs::write(
        &bad,
        r#"{"generators": 2, "relators": [[1, 2, 1, -2, -1, -2]], "matrices": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]}"#,
    )
    .unwrap();
    let o = mmm(&["h1", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not evaluate to identity"));

    std::fs::write(&bad, "{ not json").unwrap();
    let o = mmm(&["h1", bad.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn tor_generators_exactness_commands() {
    let tor = stdout(&mmm(&["tor", "--max-degree", "12", "--format", "csv"]));
    assert!(tor.lines().any(|l| l == "1,2,1"));
    assert!(tor.lines().any(|l| l == "1,12,2"));
    assert!(tor.lines().any(|l| l == "0,0,1"));

    let g = mmm(&["generators", "--max-degree", "12", "--format", "json"]);
    assert!(g.status.success());
    let v: serde_json::Value = serde_json::from_slice(&g.stdout).unwrap();
    assert_eq!(v["holds"], true);

    let e = mmm(&["exactness", "--max-degree", "10", "--format", "csv"]);
    assert!(e.status.success());
    assert!(stdout(&e).lines().skip(1).all(|l| l.ends_with(",true")));
}

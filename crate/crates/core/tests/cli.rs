use std::process::{Command, Output};

fn jc_zeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jc-zeno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn zeno_sweep_csv() {
    let out = jc_zeno(&["zeno-sweep", "--c0", "0.8", "--n-max", "10000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.ends_with('\n'));
    let (header, rows) = parse(&text);
    assert_eq!(header, ["N", "C_N_minus", "C_N_plus"]);
    assert_eq!(rows.len(), 10_000);
    assert_eq!(rows[0][0], 1.0);
    assert!(rows[0][1].abs() < 1e-15 && rows[0][2].abs() < 1e-15);
    assert!((rows[1][2] - 0.8).abs() < 1e-12);
    let last = rows.last().unwrap();
    assert!((last[1] - 0.8).abs() < 1e-3 && (last[2] - 0.8).abs() < 1e-3);
    assert!(rows.iter().all(|r| r[1] <= 0.8 + 1e-12));
    assert!(rows.iter().any(|r| r[2] > 0.8));
}

#[test]
fn free_evolution_default_grid() {
    let out = jc_zeno(&["free-evolution"]);
    assert!(out.status.success());
    let (header, rows) = parse(&stdout(&out));
    assert_eq!(header, ["gt", "c0", "C_f_plus", "C_f_oracle"]);
    assert_eq!(rows.len(), 201 * 9);
    for r in &rows {
        assert!((r[2] - r[3]).abs() <= 1e-8, "{r:?}");
    }
    let at = |gt: f64, c0: f64| {
        rows.iter()
            .find(|r| (r[0] - gt).abs() < 1e-12 && (r[1] - c0).abs() < 1e-12)
            .unwrap()[2]
    };
    assert!((at(0.0, 0.8) - 0.8).abs() < 1e-12);
    assert!(at(std::f64::consts::FRAC_PI_4, 0.8).abs() < 1e-12);
    for k in 1..=9 {
        assert!(at(std::f64::consts::FRAC_PI_2, k as f64 / 10.0).abs() < 1e-12);
    }
}

#[test]
fn single_measurement_columns_agree() {
    let out = jc_zeno(&[
        "single-measurement",
        "--c0",
        "0.8,0.5",
        "--time-points",
        "51",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse(&stdout(&out));
    assert_eq!(header, ["gt", "c0", "C_1_plus", "C_1_oracle"]);
    assert_eq!(rows.len(), 102);
    for r in &rows {
        assert!((r[2] - r[3]).abs() <= 1e-8);
    }
}

#[test]
fn single_measurement_rejects_minus_branch() {
    let out = jc_zeno(&["single-measurement", "--c0", "0.5", "--branch", "minus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bell_prep_report() {
    let out = jc_zeno(&["bell-prep", "--c0", "0.6"]);
    assert!(out.status.success());
    let (header, rows) = parse(&stdout(&out));
    assert_eq!(
        header,
        ["t_star", "survival_probability", "final_concurrence"]
    );
    // c0 = 0.6 on the plus branch: |β₀|² = 0.1
    assert!((rows[0][1] - 0.2).abs() < 1e-9);
    assert!((rows[0][2] - 1.0).abs() < 1e-9);

    let out = jc_zeno(&[
        "bell-prep",
        "--alpha0",
        "0.8944271909999159",
        "--beta0",
        "0.4472135954999579",
    ]);
    assert!(out.status.success());
    let (_, rows) = parse(&stdout(&out));
    assert!((rows[0][0] - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    assert!((rows[0][1] - 0.4).abs() < 1e-9);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = jc_zeno(&[
            "free-evolution",
            "--c0",
            "0.3,0.8",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    let streamed = jc_zeno(&["free-evolution", "--c0", "0.3,0.8", "--out", "-"]);
    assert_eq!(streamed.stdout, x);
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec![
            "zeno-sweep",
            "--c0",
            "0.8",
            "--alpha0",
            "0.8",
            "--beta0",
            "0.6",
        ],
        vec!["zeno-sweep", "--alpha0", "0.8"],
        vec!["zeno-sweep", "--c0", "1.5"],
        vec!["zeno-sweep", "--c0", "0.2,0.8"],
        vec!["free-evolution", "--time-points", "1"],
        vec!["zeno-sweep", "--n-max", "0"],
        vec!["zeno-sweep", "--g", "0"],
        vec!["bell-prep", "--alpha0", "0.9", "--beta0", "0.9"],
        vec!["bell-prep", "--c0", "1"],
        vec!["no-such-command"],
    ] {
        let out = jc_zeno(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn io_errors_exit_3() {
    let out = jc_zeno(&["zeno-sweep", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/out.csv"));
}

#[test]
fn validate_exits_0() {
    let out = jc_zeno(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));
}

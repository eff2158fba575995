use std::process::{Command, Output};

use serde_json::Value;

fn qint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qint"))
        .args(args)
        .env_remove("QINT_TOL")
        .output()
        .expect("qint runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn integrate_x_under_lebesgue_squared() {
    let out = qint(&["integrate", "--measure", "lebesgue2", "--fn", "x"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = json(&out);
    let value = doc["result"]["value"].as_f64().unwrap();
    assert!((value - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(doc["job"]["command"], "integrate");
    assert!(doc["version"].as_str().unwrap().starts_with("qint "));
}

#[test]
fn integrate_destructive_restricted() {
    let out = qint(&[
        "integrate",
        "--measure",
        "destructive:0.75",
        "--fn",
        "x",
        "--to",
        "0.75",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "measure,fn,from,to,center,value,error_bound,evaluations"
    );
    let value: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .nth(5)
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 9.0 / 32.0).abs() < 1e-8);
}

#[test]
fn integrate_finite_measure() {
    let out = qint(&[
        "integrate",
        "--measure",
        "coin:3",
        "--fn",
        "heads",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(json(&out)["result"]["value"].as_f64().unwrap(), 33.0 / 32.0);
}

#[test]
fn coin_table_csv() {
    let out = qint(&["coin", "--n-max", "7", "--digits", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,a_n,2a_n/n");
    assert_eq!(lines[1], "1,1/4,0.5000");
    assert_eq!(lines[7], "7,11333/4096,0.7905");
    assert_eq!(lines.len(), 8);
}

#[test]
fn verify_passes_with_full_coverage() {
    let out = qint(&["verify"]);
    let table = stderr(&out);
    assert!(out.status.success(), "{table}");
    let reports = json(&out);
    let reports = reports.as_array().unwrap();
    assert!(reports.len() > 19);
    assert!(reports
        .iter()
        .all(|r| r["id"].is_string() && r["pass"].is_boolean()));
    assert!(table.contains("catalog coverage: 19/19 entries"), "{table}");
    assert!(table.contains("0 unexpected"));
}

#[test]
fn spec_errors_exit_2_and_name_the_field() {
    let cases: [(&[&str], &str); 6] = [
        (
            &["integrate", "--measure", "bogus", "--fn", "x"],
            "`measure`",
        ),
        (
            &["integrate", "--measure", "destructive:0.2", "--fn", "x"],
            "`measure`",
        ),
        (&["integrate", "--fn", "nope"], "`fn`"),
        (&["integrate", "--fn", "x", "--from", "2"], "`from`"),
        (&["integrate", "--fn", "x", "--tol", "-1"], "`tol`"),
        (&["coin", "--n-max", "0"], "`n-max`"),
    ];
    for (args, field) in cases {
        let out = qint(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(field), "{args:?}: {}", stderr(&out));
    }
    let out = qint(&["integrate", "--fn", "x", "--from", "abc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--from"));
}

#[test]
fn computation_error_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(
        &path,
        r#"{"command":"integrate","measure":{"kind":"lebesgue_squared"},"fn":{"kind":"exp"},
            "quadrature":{"abs_tol":1e-300,"max_subdivisions":1,"root_tol":1e-13},
            "format":"json"}"#,
    )
    .unwrap();
    let out = qint(&["run", "--job", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("computation failed"));
}

#[test]
fn tolerance_env_var_reaches_the_echo() {
    let out = Command::new(env!("CARGO_BIN_EXE_qint"))
        .args(["integrate", "--fn", "exp"])
        .env("QINT_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        json(&out)["job"]["quadrature"]["abs_tol"].as_f64(),
        Some(1e-6)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_qint"))
        .args(["integrate", "--fn", "exp", "--tol", "1e-8"])
        .env("QINT_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(
        json(&out)["job"]["quadrature"]["abs_tol"].as_f64(),
        Some(1e-8)
    );
}

#[test]
fn job_echo_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &[
            "integrate",
            "--measure",
            "destructive:0.6",
            "--fn",
            "poly:1,-2,3",
            "--from",
            "0.1",
            "--center",
            "0.4",
        ],
        &["coin", "--n-max", "12", "--digits", "6", "--format", "json"],
        &["ftc", "--fn", "sin", "--at", "0.3,0.6", "--step", "0.02"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = qint(args);
        assert!(first.status.success(), "{}", stderr(&first));
        let path = dir.path().join(format!("job{i}.json"));
        std::fs::write(&path, serde_json::to_string(&json(&first)["job"]).unwrap()).unwrap();
        let replay = qint(&["run", "--job", path.to_str().unwrap()]);
        assert!(replay.status.success(), "{}", stderr(&replay));
        assert_eq!(first.stdout, replay.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ftc.csv");
    let p = path.to_str().unwrap();
    let args = ["ftc", "--fn", "exp", "--format", "csv", "--out", p];
    let out = qint(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    qint(&args);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("b,half_second_difference,f_b,"));
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[1] - cols[2]).abs() < 1e-3);
        assert!((cols[4] - cols[5]).abs() < 1e-6);
    }
}

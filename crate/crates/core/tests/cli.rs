use std::process::{Command, Output};

use fcseries::cli::{format_number, run, TABLE_HEADER};

fn fcseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcseries")).args(args).output().expect("running fcseries")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("{key} missing in {text}"))
}

#[test]
fn eval_at_x_one() {
    let o = fcseries(&["eval", "--x", "1", "--r", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "value"), "0.193147180559945");
    assert_eq!(field(&text, "route"), "closed_form");
    assert!(text.contains("error_bound: "));
    assert!(text.contains("work: "));
}

#[test]
fn eval_by_angle() {
    let o = fcseries(&["eval", "--phi", "1.5707963267948966", "--r", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "value"), "0.153426409720027");
    let o = fcseries(&["eval", "--phi", "90", "--degrees", "--r", "1"]);
    assert_eq!(field(&stdout(&o), "value"), "0.153426409720027");
}

#[test]
fn eval_routes() {
    let mut values = Vec::new();
    for route in ["series", "quad", "closed", "auto"] {
        let o =
            fcseries(&["eval", "--x", "0.3", "--r", "0.7", "--route", route, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{route}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        values.push(v["value"].as_f64().unwrap());
    }
    for v in &values {
        assert!((v - 0.119_012_180_021_414_56).abs() <= 2e-12, "{values:?}");
    }
    let o = fcseries(&["eval", "--phi", "1.0", "--r", "0.9", "--route", "series"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn eval_domain_errors() {
    let o = fcseries(&["eval", "--x", "-1", "--r", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("x must lie in (-1, 1]"), "{}", stderr(&o));

    let o = fcseries(&["eval", "--x", "0.5", "--r", "1", "--route", "series"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fcseries(&["eval", "--x", "0.5", "--r", "0.5", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(2));
    // x and phi together, or neither
    assert_eq!(
        fcseries(&["eval", "--x", "0.5", "--phi", "1", "--r", "0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(fcseries(&["eval", "--r", "0.5"]).status.code(), Some(2));
    assert_eq!(
        fcseries(&["eval", "--x", "0.5", "--r", "0.5", "--precision", "18"]).status.code(),
        Some(2)
    );
}

#[test]
fn eval_tolerance_failure_exit_code() {
    let o = fcseries(&[
        "eval",
        "--x",
        "0.5",
        "--r",
        "0.99999999",
        "--route",
        "series",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn scan_inequality_defaults() {
    let o = fcseries(&["scan", "--kind", "inequality"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name| header.iter().position(|h| *h == name).unwrap();
    assert_eq!(row[col("kind")], "inequality");
    assert_eq!(row[col("pass")], "true");
    assert_eq!(row[col("points_checked")], "10000");
    assert!(row[col("min_margin")].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn scan_single_radius_monotonicity() {
    let o = fcseries(&[
        "scan",
        "--kind",
        "monotonicity",
        "--r-min",
        "0.5",
        "--r-max",
        "0.5",
        "--r-count",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn scan_invalid_grids() {
    assert_eq!(
        fcseries(&["scan", "--kind", "inequality", "--var-min", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fcseries(&["scan", "--kind", "consistency", "--var-count", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(fcseries(&["scan", "--kind", "identity", "--r-count", "3"]).status.code(), Some(2));
    assert_eq!(
        fcseries(&["scan", "--kind", "monotonicity", "--var-count", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(fcseries(&["scan", "--kind", "bogus"]).status.code(), Some(2));
}

#[test]
fn scan_json_has_report_fields() {
    for kind in ["consistency", "monotonicity", "inequality", "identity"] {
        let o = fcseries(&["scan", "--kind", kind, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{kind}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["kind"], kind);
        assert_eq!(v["violations"].as_array().unwrap().len(), 0);
        assert!(v["points_checked"].as_u64().unwrap() > 0);
        assert!(v["min_margin"].is_number());
        assert!(v["worst_point"]["var"].is_number() && v["worst_point"]["r"].is_number());
    }
}

#[test]
fn table_anchor_row() {
    let o = fcseries(&[
        "table",
        "--surface",
        "f",
        "--var-min",
        "0",
        "--var-max",
        "1",
        "--var-count",
        "3",
        "--r-min",
        "1",
        "--r-max",
        "1",
        "--r-count",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], TABLE_HEADER);
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[3],
        format!("1.0,1.0,0.193147180559945,{},closed_form", lines[3].split(',').nth(3).unwrap())
    );
}

#[test]
fn table_margin_positive() {
    let o = fcseries(&["table", "--surface", "margin", "--var-count", "25", "--r-count", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 200);
    for row in rows {
        let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!(value > 0.0, "{row}");
    }
}

#[test]
fn table_dfdx_json() {
    let o = fcseries(&[
        "table",
        "--surface",
        "dfdx",
        "--var-count",
        "4",
        "--r-count",
        "2",
        "--tol",
        "1e-10",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        assert!(row["value"].as_f64().unwrap() > 0.0);
        assert_eq!(row["route"], "quadrature");
    }
}

#[test]
fn table_dfdx_near_pole_reports_unreachable_tolerance() {
    // At x = -0.999, r = 1 the integrand peaks near 1e5; 1e-12 is out of reach.
    let o = fcseries(&["table", "--surface", "dfdx", "--var-count", "4", "--r-count", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerance unreachable"));
}

#[test]
fn table_empty_grid() {
    assert_eq!(fcseries(&["table", "--surface", "f", "--var-count", "0"]).status.code(), Some(2));
    assert_eq!(fcseries(&["table", "--surface", "f", "--r-count", "0"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: [&[&str]; 3] = [
        &["table", "--surface", "f", "--var-count", "17", "--r-count", "9"],
        &["scan", "--kind", "inequality", "--format", "json"],
        &["scan", "--kind", "consistency", "--format", "csv"],
    ];
    for args in cases {
        let a = fcseries(args);
        let b = fcseries(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile_dir();
    let path = dir.join("table.csv");
    let o = fcseries(&[
        "table",
        "--surface",
        "f",
        "--var-count",
        "3",
        "--r-count",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(TABLE_HEADER));
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("fcseries-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn precision_controls_digits() {
    let o = fcseries(&["eval", "--x", "1", "--r", "1", "--precision", "5"]);
    assert_eq!(field(&stdout(&o), "value"), "0.19315");
    assert_eq!(format_number(3.333_330_833_335_333e-7, 6), "3.33333e-7");
    assert_eq!(format_number(1.0, 15), "1.0");
    assert_eq!(format_number(std::f64::consts::LN_2 - 0.5, 17), "0.1931471805599453");
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["fcseries", "eval", "--x", "0.25", "--r", "0.5", "--format", "csv"];
    let mut out = Vec::new();
    let mut err = Vec::new();
    assert_eq!(run(args, &mut out, &mut err), 0);
    assert_eq!(out, fcseries(&args[1..]).stdout);
}

#[test]
fn help_exits_zero() {
    let o = fcseries(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("scan"));
}

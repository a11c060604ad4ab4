use std::path::Path;
use std::process::{Command, Output};

fn entropic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entropic"))
        .args(args)
        .env_remove(entropic_cli::OUT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV table (metadata and header skipped).
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(csv: &str) -> String {
    csv.lines().find(|l| !l.starts_with('#')).unwrap().to_string()
}

fn num(cell: &str) -> f64 {
    cell.parse().unwrap()
}

#[test]
fn single_point_simulation_is_the_identity() {
    let out = entropic(&["simulate", "--grid", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(header(&text), "t,p_w_numeric,p_w_closed,p_wperp_closed,abs_error");
    let rows = rows(&text);
    assert_eq!(rows.len(), 1);
    let values: Vec<f64> = rows[0].iter().map(|c| num(c)).collect();
    assert_eq!(values, vec![0.0, 0.0, 0.0, 1.0, 0.0]);
}

#[test]
fn constant_simulation_follows_sine_squared() {
    let out = entropic(&["simulate", "--scenario", "constant", "--t-max", "3", "--grid", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# passed=true"));
    for row in rows(&text) {
        let t = num(&row[0]);
        assert!((num(&row[1]) - t.sin().powi(2)).abs() < 1e-8);
        assert!((num(&row[2]) + num(&row[3]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn field_components_start_along_x() {
    let out = entropic(&["fields", "--scenario", "constant", "--t-max", "2", "--grid", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(header(&text), "t,bx,by,bz,b_perp");
    let rows = rows(&text);
    assert_eq!((num(&rows[0][1]), num(&rows[0][2])), (1.0, 0.0));
    for row in &rows {
        let radius = num(&row[1]).hypot(num(&row[2]));
        assert!((radius - 1.0).abs() < 1e-10);
        assert!((num(&row[4]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn region_flags_points_below_the_boundary() {
    let out = entropic(&["region", "--grid", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(header(&text), "lambda,theta0,f_P,in_region");
    let rows = rows(&text);
    assert_eq!(rows.len(), 64);
    for row in rows {
        let z = num(&row[0]) * num(&row[1]);
        let inside = row[3] == "true";
        assert_eq!(inside, z < 2.5128624172523, "lambda theta0 = {z}");
        let f = num(&row[2]);
        assert!(((-z).exp() * (1.0 + z).powi(2) * f - 1.0).abs() < 1e-9);
    }
}

#[test]
fn strong_field_confines_the_region() {
    let out = entropic(&["region", "--lambda-min", "36", "--lambda-max", "38", "--theta0-max", "1", "--grid", "20"]);
    assert_eq!(out.status.code(), Some(0));
    for row in rows(&stdout(&out)) {
        if num(&row[1]) >= 0.1 {
            assert_eq!(row[3], "false");
        }
    }
}

#[test]
fn json_output_parses() {
    let out = entropic(&["report", "--format", "json", "--lambda", "1/pi", "--gamma-over-hbar", "1/2", "--theta0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["scenario"], "constant");
    assert_eq!(rows[3]["scenario"], "power-law");
    assert_eq!(doc["meta"]["normalizer_r"], 1);
    let rates: Vec<f64> = rows.iter().map(|r| r["r_E"].as_f64().unwrap()).collect();
    assert!(rates.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "# example\nscenario = exponential\nlambda = 2\ngrid = 3\n").unwrap();
    let config = config.to_str().unwrap();

    let from_file = stdout(&entropic(&["fisher", "--config", config]));
    assert!(from_file.contains("# scenario=exponential"));
    assert_eq!(rows(&from_file).len(), 3);

    let overridden = stdout(&entropic(&["fisher", "--config", config, "--grid", "5", "--scenario", "constant"]));
    assert!(overridden.contains("# scenario=constant"));
    assert_eq!(rows(&overridden).len(), 5);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("geo.csv");
    let out = entropic(&["geodesic", "--scenario", "power-law", "--lambda", "2/pi", "--grid", "11", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert_eq!(header(&text), "xi,theta_closed,theta_numeric,speed,abs_error");
    assert!(text.contains("# passed=true"));
}

#[test]
fn relative_out_paths_honour_the_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_entropic"))
        .args(["report", "--out", "table.csv"])
        .env(entropic_cli::OUT_DIR_ENV, dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(Path::new(&dir.path().join("table.csv")).exists());
}

#[test]
fn invalid_configuration_exits_with_two() {
    for args in [
        &["simulate", "--dt", "0"][..],
        &["simulate", "--scenario", "quadratic"],
        &["fisher", "--gamma-over-hbar", "abc"],
        &["region", "--lambda-min", "-1"],
        &["launch"],
    ] {
        let out = entropic(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(entropic(&["report", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_tolerance_exits_with_one() {
    let out = entropic(&["simulate", "--omega0", "-1", "--dt", "0.01", "--t-max", "2", "--tolerance", "1e-12"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("# passed=false"));

    let drift = entropic(&["simulate", "--dt", "0.5", "--t-max", "10"]);
    assert_eq!(drift.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&drift.stderr).contains("unitarity drift"));
}

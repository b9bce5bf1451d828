use std::f64::consts::FRAC_PI_4;
use std::process::{Command, Output};

fn obsclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obsclone")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn sweep_rows(text: &str) -> Vec<Vec<f64>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["theta", "g1", "g2", "dm1", "dm2", "product", "bound", "saturated"]
    );
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (0..7).map(|i| r[i].parse().unwrap()).collect()
        })
        .collect()
}

#[test]
fn list_shows_six_machines() {
    let out = obsclone(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["nc", "conjugated", "phase-covariant", "sign-flipped", "commuting", "universal-marginal"] {
        assert!(stdout(&out).contains(name));
    }
    let v = json(&obsclone(&["list", "--format", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn unknown_format_is_usage_error() {
    assert_eq!(obsclone(&["list", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(obsclone(&["verify", "--machine", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_nc_quarter_turn() {
    let out = obsclone(&["verify", "--machine", "nc", "--theta", "0.7853981634"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["g1_fit", "g2_fit"] {
        assert!((v["noise"][key].as_f64().unwrap() - 2f64.sqrt()).abs() <= 1e-9);
    }
    assert_eq!(v["covariance"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_commuting_is_perfect() {
    let out = obsclone(&["verify", "--machine", "commuting"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["noise"]["g1_fit"].as_f64(), Some(1.0));
    assert!(v["noise"]["residual_max"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn verify_at_boundary_is_domain_error() {
    let out = obsclone(&["verify", "--machine", "nc", "--theta", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverges"));
}

#[test]
fn sweep_minimum_at_quarter_turn() {
    let out = obsclone(&["sweep", "--machine", "nc", "--bloch", "0,0,1", "--steps", "99"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let rows = sweep_rows(&text);
    assert_eq!(rows.len(), 99);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    let (argmin, min) =
        rows.iter().enumerate().fold((0, f64::INFINITY), |b, (i, r)| if r[5] < b.1 { (i, r[5]) } else { b });
    assert_eq!(argmin, 49);
    assert!((rows[49][0] - FRAC_PI_4).abs() <= 1e-15);
    assert!((min - 4.0).abs() <= 1e-9);
    // θ ↔ π/2 − θ swaps tan and cot
    for i in 0..99 {
        let (a, b) = (rows[i][5], rows[98 - i][5]);
        assert!((a - b).abs() <= 1e-9 * a, "row {i}: {a} vs {b}");
    }
}

#[test]
fn single_point_sweep_matches_verify() {
    let row = &sweep_rows(&stdout(&obsclone(&["sweep", "--machine", "nc", "--theta", "pi/3"])))[0];
    let v = json(&obsclone(&["verify", "--machine", "nc", "--theta", "pi/3"]));
    assert_eq!(row[1], v["noise"]["g1_fit"].as_f64().unwrap());
    assert_eq!(row[2], v["noise"]["g2_fit"].as_f64().unwrap());
}

#[test]
fn sweep_rejects_out_of_range_grid() {
    assert_eq!(obsclone(&["sweep", "--theta-min", "0", "--theta-max", "1"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_io_error() {
    let out = obsclone(&["sweep", "--steps", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn nogo_smoke() {
    let out = obsclone(&["nogo", "--restarts", "1", "--seed", "1"]);
    let v = json(&out);
    assert!(v["evaluations"].as_u64().unwrap() > 0);
    assert!(v["caveat"].as_str().unwrap().contains("numerical evidence"));
    assert_eq!(v["best_parameters"].as_array().unwrap().len(), 15);
}

#[test]
fn nogo_commuting_inverted_criterion() {
    let out = obsclone(&["nogo", "--commuting", "--restarts", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["best_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn compare_sign_symmetry_and_precondition() {
    let up = obsclone(&["compare", "--bloch", "0,0,1"]);
    let down = obsclone(&["compare", "--bloch", "0,0,-1"]);
    assert_eq!(up.status.code(), Some(0));
    assert_eq!(up.stdout, down.stdout);
    let v = json(&obsclone(&["compare", "--format", "json"]));
    assert!((v["observable_product"].as_f64().unwrap() - 4.0).abs() <= 1e-9);
    assert_eq!(v["discrepancy"].as_bool(), Some(true));
    assert_eq!(obsclone(&["compare", "--bloch", "1,0,0"]).status.code(), Some(2));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"machine": "nc", "theta": "pi/3", "seed": 5}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_config = json(&obsclone(&["--config", c, "verify"]));
    assert!((from_config["theta"].as_f64().unwrap() - std::f64::consts::FRAC_PI_3).abs() <= 1e-15);
    let overridden = json(&obsclone(&["--config", c, "verify", "--theta", "pi/4"]));
    assert!((overridden["theta"].as_f64().unwrap() - FRAC_PI_4).abs() <= 1e-15);

    std::fs::write(&cfg, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(obsclone(&["--config", c, "list"]).status.code(), Some(2));
}

#[test]
fn output_file_and_stdout_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = obsclone(&["sweep", "--steps", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), obsclone(&["sweep", "--steps", "5"]).stdout);
}

use std::io::Write as _;
use std::process::Command;

use spectral_genus::{Rational, SingularityReport};
use spectral_genus_cli::{run, EXIT_VIOLATION};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spectral-genus").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn report(args: &[&str]) -> SingularityReport {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn cusp_from_expression() {
    let r = report(&["analyze", "--poly", "x^2+y^3", "--assume-nondegenerate"]);
    assert_eq!(r.mu, Rational::from(2));
    assert_eq!(r.spectral_genus, Rational::frac(1, 6));
    assert!(r.weak_ok && r.strong_ok && r.equality_attained);
}

#[test]
fn homogeneous_quartic_curve() {
    let r = report(&["homog", "-n", "1", "-d", "4"]);
    assert_eq!(r.mu, Rational::from(9));
    assert_eq!(r.spectral_genus, Rational::from(1));
    assert_eq!(r.geometric_genus, Some(6));
}

#[test]
fn suspension_of_cusp() {
    let (code, out, _) = call(&["--format", "json", "suspend", "--weights", "1/2,1/3", "--k", "6"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["geometric_genus"], 1);
    assert_eq!(v["base_spectral_genus"], "1/6");
}

#[test]
fn table_output_is_readable() {
    let (code, out, _) = call(&["family", "x", "2", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("mu                7"));
    assert!(out.contains("spectral genus    7/9"));
}

#[test]
fn json_round_trip() {
    let r = report(&["puiseux", "--pairs", "3:2,7:2"]);
    let text = serde_json::to_string(&r).unwrap();
    let back: SingularityReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.mu, Rational::from(22));
}

#[test]
fn csv_report_matches_json() {
    let args = ["quasihom", "--weights", "1/3,1/4,1/5"];
    let r = report(&args);
    let (code, out, _) = call(&["--format", "csv", args[0], args[1], args[2]]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "germ", "n", "mu", "spectral_genus", "geometric_genus", "margin", "weak", "strong",
            "equality", "torsion_exponent", "methods"
        ]
    );
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(row[2].parse::<Rational>().unwrap(), r.mu);
    assert_eq!(row[3].parse::<Rational>().unwrap(), r.spectral_genus);
    assert_eq!(row[5].parse::<Rational>().unwrap(), r.margin);
}

#[test]
fn homogeneous_sweep_csv() {
    let (code, out, _) = call(&["--format", "csv", "sweep", "homog", "-n", "2", "--from", "2", "--to", "8"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["param", "n", "mu", "spectral_genus", "margin", "ratio", "weak", "strong", "equality", "torsion_exponent"]
    );
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(&rows[2][3], "1/4");
}

#[test]
fn scale_sweep_json() {
    let (code, out, err) = call(&[
        "--format", "json", "sweep", "scale", "--poly", "x^2+y^3", "--k-max", "5",
        "--assume-nondegenerate",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["sweep"]["records"].as_array().unwrap().len(), 5);
    assert_eq!(v["sweep"]["predicted_limit"], "5/12");
}

#[test]
fn distribution_family_csv() {
    let (code, out, _) = call(&["--format", "csv", "distribution", "--homog", "1", "--from", "3", "--to", "12", "--grid", "200"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["param", "mu", "min_alpha", "ratio_pg", "ratio_sg", "cdf_distance"]
    );
    assert_eq!(rdr.records().count(), 10);
}

#[test]
fn polynomial_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# E8").unwrap();
    writeln!(file, "vars: x,y").unwrap();
    writeln!(file, "x^3+y^5").unwrap();
    let path = file.path().to_str().unwrap();
    let r = report(&["analyze", "--poly", path, "--assume-nondegenerate"]);
    assert_eq!(r.mu, Rational::from(8));
    assert_eq!(r.spectral_genus, Rational::frac(14, 15));
}

#[test]
fn several_points_are_summed() {
    let r = report(&[
        "analyze", "--poly", "x^2+y^3", "--poly", "x^2+y^2", "--assume-nondegenerate",
    ]);
    assert_eq!(r.mu, Rational::from(3));
    assert_eq!(r.spectral_genus, Rational::frac(1, 6));
}

#[test]
fn oracle_mode_agrees() {
    for args in [
        vec!["analyze", "--poly", "x^3+y^4+z^5", "--assume-nondegenerate", "--oracle"],
        vec!["quasihom", "--weights", "1/2,1/3,1/7", "--oracle"],
        vec!["family", "xy", "3", "4", "--oracle"],
        vec!["puiseux", "--pairs", "3:2,7:2", "--oracle"],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
    }
}

#[test]
fn usage_and_input_errors_exit_one() {
    for args in [
        vec!["bogus"],
        vec!["homog", "-n", "1"],
        vec!["analyze", "--poly", "x^2+y^3"],
        vec!["analyze", "--poly", "x^2*y^2", "--assume-nondegenerate"],
        vec!["quasihom", "--weights", "1/2,3/2"],
        vec!["puiseux", "--pairs", "3:3"],
        vec!["family", "zz", "2", "3"],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(!err.is_empty());
    }
    assert_ne!(EXIT_VIOLATION, 1);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("analyze"));
}

#[test]
fn binary_runs_with_thread_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_spectral-genus"))
        .args(["homog", "-n", "2", "-d", "5"])
        .env("SPECTRAL_GENUS_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mu                64"));
}

mod common;

use std::ffi::OsString;
use std::process::Output;

use common::bin;
use plankton_dynamics::cli::{recipe_path, run_with, EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION};

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<OsString> = std::iter::once("plankton").chain(args.iter().copied()).map(OsString::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out, err) = in_process(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn fixed_points_report() {
    let v = json(&["fixed-points", "--r", "0.5", "--c", "1", "--gamma", "1.775", "--h", "1"]);
    assert_eq!(v["positive"]["classification"], "Attracting");
    let q = v["positive"]["q"].as_f64().unwrap();
    assert!(q < 1.0 && (q - 0.9996).abs() < 3e-3, "{q}");

    let v = json(&["fixed-points", "--r", "2", "--c", "1", "--gamma", "0", "--h", "1"]);
    assert_eq!(v["E0"]["classification"], "NonHyperbolic");

    let v = json(&["fixed-points", "--r", "0.5", "--c", "1", "--gamma", "0.9", "--h", "1"]);
    assert!(v.get("positive").is_none());
    assert_eq!(v["E1"]["classification"], "Attracting");
}

#[test]
fn ns_report_values() {
    let v = json(&["ns", "--r", "0.5", "--c", "1", "--h", "1"]);
    assert!((v["L"].as_f64().unwrap() + 0.2142).abs() < 2e-3);
    assert!((v["gamma0"].as_f64().unwrap() - (3.0 + 17f64.sqrt()) / 4.0).abs() < 1e-12);
    assert_eq!(v["direction"], "AttractingCurveForGammaAbove");
    for key in ["lambda_re", "lambda_im", "L20_re", "L21_im", "transversality", "u", "v"] {
        assert!(v[key].is_number(), "{key}");
    }

    let v = json(&["ns", "--r", "0.8", "--c", "2", "--h", "2"]);
    assert!((v["L"].as_f64().unwrap() + 0.0141).abs() < 2e-3);

    let (code, _, err) = in_process(&["ns", "--r", "0.5", "--c", "1", "--h", "2"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("no critical parameter"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fixed-points", "--r", "0", "--c", "1", "--gamma", "1"]).status.code(), Some(EXIT_VALIDATION));
    assert_eq!(run(&["fixed-points", "--r", "0.5", "--c", "1", "--gamma", "1", "--h", "3"]).status.code(), Some(EXIT_VALIDATION));
    assert_eq!(run(&["fixed-points", "--r", "0.5", "--c", "1", "--gamma", "1", "--bogus", "2"]).status.code(), Some(EXIT_VALIDATION));
    assert_eq!(run(&["bifdiag", "--r", "0.5", "--c", "1", "--gamma-min", "2", "--gamma-max", "1", "--u0", "0.3", "--v0", "0.6"]).status.code(), Some(EXIT_VALIDATION));
    assert_eq!(run(&["control", "--r", "0.5", "--c", "1", "--gamma", "0.5"]).status.code(), Some(EXIT_VALIDATION));
    assert_eq!(run(&["nonsense"]).status.code(), Some(EXIT_VALIDATION));
    let io = run(&["simulate", "--r", "0.5", "--c", "1", "--gamma", "1.2", "--u0", "0.8", "--v0", "1.5", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(io.status.code(), Some(EXIT_RUNTIME));
    assert!(String::from_utf8_lossy(&io.stderr).contains("nonexistent-dir"));

    let help = run(&["bifdiag", "--help"]);
    assert_eq!(help.status.code(), Some(EXIT_OK));
    let text = String::from_utf8_lossy(&help.stdout);
    for flag in ["--r", "--c", "--h", "--gamma-min", "--gamma-max", "--steps", "--transient", "--samples", "--seed", "--out", "--threads", "--config"] {
        assert!(text.contains(flag), "{flag} missing from help");
    }
}

#[test]
fn simulate_csv_and_control_mode() {
    let out = run(&["simulate", "--r", "0.5", "--c", "1", "--gamma", "1.2", "--u0", "0.8", "--v0", "1.5", "--n", "5000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "iteration,u,v");
    assert_eq!(lines.len(), 5002);
    let last: Vec<f64> = lines[5001].split(',').skip(1).map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 5.0 / 7.0).abs() < 1e-9 && (last[1] - 24.0 / 49.0).abs() < 1e-9);

    let (code, text, _) = in_process(&["simulate", "--r", "0.5", "--c", "1", "--gamma", "2", "--u0", "0.38", "--v0", "0.94", "--n", "5000", "--s1", "1.5", "--s2", "1.0"]);
    assert_eq!(code, EXIT_OK);
    let last: Vec<f64> = text.lines().last().unwrap().split(',').skip(1).map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 1.0 / 3.0).abs() < 1e-6, "{last:?}");
}

#[test]
fn control_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan.csv");
    let (code, text, err) = in_process(&[
        "control", "--r", "0.5", "--c", "1", "--gamma", "2", "--scan-points", "21", "--scan-out", scan.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,id,s1,s2,a,b,c");
    assert_eq!(lines.len(), 7);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "vertex");
    assert!((first[2].parse::<f64>().unwrap() + 1.0 / 6.0).abs() < 1e-12);
    let scan_text = std::fs::read_to_string(&scan).unwrap();
    assert_eq!(scan_text.lines().next(), Some("s1,s2,stable"));
    assert_eq!(scan_text.lines().count(), 1 + 21 * 21);
    assert!(scan_text.lines().any(|l| l.ends_with(",1")));
}

#[test]
fn invariant_grid() {
    let (code, text, _) = in_process(&["invariant", "--r", "0.5", "--c", "0.4", "--gamma", "0.6", "--grid", "8", "--converge"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,member,image_member,converged,iterations"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 64);
    for row in &rows {
        if row[2] == "1" {
            assert_eq!(row[3], "1");
            let u: f64 = row[0].parse().unwrap();
            if u > 0.0 {
                assert_eq!(row[4], "1", "{row:?}");
            }
        }
    }
    let (code, _, _) = in_process(&["invariant", "--r", "0.5", "--c", "0.4", "--gamma", "0.6", "--kind", "N1"]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# test recipe\nr = 0.5\nc = 1\ngamma = 1.79\nh = 1\n").unwrap();
    let v = json(&["fixed-points", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["positive"]["classification"], "Repelling");
    let v = json(&["fixed-points", "--config", cfg.to_str().unwrap(), "--gamma", "1.775"]);
    assert_eq!(v["positive"]["classification"], "Attracting");

    std::fs::write(&cfg, "r 0.5\n").unwrap();
    let (code, _, err) = in_process(&["fixed-points", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("config"), "{err}");
    let (code, _, _) = in_process(&["fixed-points", "--config", "/nonexistent.conf"]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn sweeps_are_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3", "3"] {
        let path = dir.path().join(format!("bif{}.csv", outputs.len()));
        let out = bin()
            .args(["bifdiag", "--config"])
            .arg(recipe_path("bifdiag_h1.conf"))
            .args(["--steps", "30", "--samples", "20", "--threads", threads, "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stderr).contains("diverged"));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outputs.pop().unwrap()).unwrap();
    assert_eq!(text.lines().next(), Some("gamma,sample_index,u,v"));
    assert_eq!(text.lines().count(), 1 + 30 * 20);

    let run_mle = |threads: &str| {
        bin()
            .current_dir(dir.path())
            .args(["mle", "--config"])
            .arg(recipe_path("mle_h2.conf"))
            .args(["--steps", "12", "--n", "2000", "--threads", threads, "--seed", "4"])
            .output()
            .unwrap()
    };
    // the recipe names its own output file, relative to the working directory
    assert!(run_mle("1").status.success());
    let first = std::fs::read(dir.path().join("mle_h2.csv")).unwrap();
    assert_eq!(first.split(|b| *b == b'\n').filter(|l| !l.is_empty()).count(), 13);
    assert!(run_mle("4").status.success());
    assert_eq!(first, std::fs::read(dir.path().join("mle_h2.csv")).unwrap());
}

#[test]
fn region_csv_marks_missing_gamma0() {
    let (code, text, err) = in_process(&[
        "region", "--r-min", "0.3", "--r-max", "0.9", "--r-steps", "4", "--c-min", "0.5", "--c-max", "2", "--c-steps", "3", "--h", "2",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "r,c,gamma_low,gamma_high");
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().any(|r| r.ends_with(",NaN")));
    assert!(err.contains("warning"));
}

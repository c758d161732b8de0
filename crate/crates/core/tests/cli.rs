use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn poafd(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poafd"))
        .current_dir(dir)
        .args(args)
        .env_clear()
        .envs(env.iter().copied())
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const SMALL: [&str; 6] = ["--grid-radial", "8", "--grid-angular", "16", "--max-terms", "6"];

fn write_kernel(dir: &Path) {
    // K_q for q = 0.5, truncated at degree 31
    let coeffs: Vec<String> = (0..32).map(|k| format!("[{},0.0]", 0.5f64.powi(k))).collect();
    std::fs::write(dir.join("f.json"), format!(r#"{{"type":"disc","coeffs":[{}]}}"#, coeffs.join(","))).unwrap();
}

#[test]
fn expand_reports_terms_and_residuals() {
    let dir = tempfile::tempdir().unwrap();
    write_kernel(dir.path());
    let out = poafd(dir.path(), &[&["expand", "--input", "f.json"], &SMALL[..]].concat(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["command"], "expand");
    let norms = v["result"]["residual_norms"].as_array().unwrap();
    assert_eq!(norms.len(), v["result"]["coefficients"].as_array().unwrap().len() + 1);
    assert!(norms.last().unwrap().as_f64().unwrap() < norms[0].as_f64().unwrap());
}

#[test]
fn output_file_gets_csv_sibling() {
    let dir = tempfile::tempdir().unwrap();
    write_kernel(dir.path());
    let out = poafd(dir.path(), &[&["invert", "--input", "f.json", "--output", "r.json"], &SMALL[..]].concat(), &[]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,q_re,q_im,order,coeff_re,coeff_im,coeff_abs,residual");
    assert!(lines.count() >= 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["inverse"]["type"], "boundary");
}

#[test]
fn precedence_flags_over_env_over_config() {
    let dir = tempfile::tempdir().unwrap();
    write_kernel(dir.path());
    std::fs::write(dir.path().join("c.json"), r#"{"max_terms": 3, "grid_radial": 8, "grid_angular": 16}"#).unwrap();
    let base = ["expand", "--input", "f.json", "--config", "c.json"];

    let v = json(&poafd(dir.path(), &base, &[]));
    assert_eq!(v["config"]["max_terms"], 3);
    let v = json(&poafd(dir.path(), &base, &[("POAFD_MAX_TERMS", "2")]));
    assert_eq!(v["config"]["max_terms"], 2);
    let v = json(&poafd(dir.path(), &[&base[..], &["--max-terms", "1"]].concat(), &[("POAFD_MAX_TERMS", "2")]));
    assert_eq!(v["config"]["max_terms"], 1);
    assert_eq!(v["result"]["coefficients"].as_array().unwrap().len(), 1);
}

#[test]
fn pseudo_invert_accepts_samples() {
    let dir = tempfile::tempdir().unwrap();
    let m = 64;
    let samples: String = (0..m)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / m as f64;
            format!("{},{}\n", 3.0 * t.cos(), t.sin())
        })
        .collect();
    std::fs::write(dir.path().join("s.csv"), samples).unwrap();
    let out = poafd(dir.path(), &[&["pseudo-invert", "--input", "s.csv"], &SMALL[..]].concat(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // 3cos t + i sin t = 2 e^{it} + e^{-it}
    let defect = json(&out)["result"]["defect"].as_f64().unwrap();
    assert!((defect - 1.0).abs() < 1e-12, "{defect}");
}

#[test]
fn basis_uses_plan_file() {
    let dir = tempfile::tempdir().unwrap();
    write_kernel(dir.path());
    std::fs::write(dir.path().join("plan.json"), "[[0.5,0.0],[0.0,0.4]]").unwrap();
    let out = poafd(dir.path(), &["basis", "--input", "f.json", "--plan-file", "plan.json"], &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["transfer"].as_array().unwrap().len(), 2);

    std::fs::write(dir.path().join("dup.json"), "[[0.5,0.0],[0.5,0.0]]").unwrap();
    let out = poafd(dir.path(), &["basis", "--input", "f.json", "--plan-file", "dup.json"], &[]);
    assert_eq!(out.status.code(), Some(8));
}

#[test]
fn verify_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = poafd(dir.path(), &["verify", "--trials", "10"], &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["result"]["all_passed"], true);
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_kernel(dir.path());
    std::fs::write(dir.path().join("bad.json"), r#"{"type":"disc","coeffs":[[1.0]]}"#).unwrap();
    std::fs::write(dir.path().join("zero.json"), r#"{"type":"disc","coeffs":[[0.0,0.0]]}"#).unwrap();

    let cases: [(&[&str], i32); 5] = [
        (&["expand"], 2),
        (&["expand", "--input", "f.json", "--mode", "weak", "--rho", "1.5"], 2),
        (&["expand", "--input", "bad.json"], 3),
        (&["expand", "--input", "missing.json"], 4),
        (&["expand", "--input", "zero.json"], 6),
    ];
    for (args, code) in cases {
        let out = poafd(dir.path(), args, &[]);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["exit_code"], code);
    }
}

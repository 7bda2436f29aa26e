//! End-to-end checks of the command-line interface: verb output
//! documents, numeric rendering, and the exit-code contract.

use std::process::{Command, Output};

use serde_json::Value;

fn qahd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qahd"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON document")
}

#[test]
fn pair_matches_the_half_line_moment() {
    // integral of x e^(-x^2) over (0, inf) is 1/2.
    let out = qahd(&["pair", "xplus(1,0)", "--phi", "hermite:1"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert!((doc["value"]["re"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!(doc["value"]["im"].as_f64().unwrap().abs() < 1e-12);
    assert!(doc["error_estimate"].as_f64().unwrap() < 1e-6);
}

#[test]
fn dilate_halves_the_delta_coefficient() {
    let out = qahd(&["dilate", "--a", "2", "delta(0)"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let records = doc.as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["family"], "delta");
    assert_eq!(records[0]["m"], 0);
    assert_eq!(records[0]["coeff"]["re"].as_f64().unwrap(), 0.5);
    assert_eq!(records[0]["coeff"]["im"].as_f64().unwrap(), 0.0);
    // Floats render at 17 significant digits, integers plainly.
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("5.0000000000000000e-1"));
    assert!(text.contains("\"m\":0"));
}

#[test]
fn expand_reports_the_finite_part_companion() {
    let out = qahd(&["expand", "pfplus(1,0)"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let components = doc.as_array().unwrap();
    assert_eq!(components.len(), 1);
    assert_eq!(components[0]["degree"]["re"].as_f64().unwrap(), -1.0);
    assert_eq!(components[0]["order"], 1);
    let companions = components[0]["companions"].as_array().unwrap();
    assert_eq!(companions.len(), 1);
    let delta = &companions[0].as_array().unwrap()[0];
    assert_eq!(delta["family"], "delta");
    assert_eq!(delta["coeff"]["re"].as_f64().unwrap(), 1.0);
}

#[test]
fn fourier_of_a_delta_derivative_is_a_polynomial_symbol() {
    let out = qahd(&["fourier", "delta(1)"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let records = doc.as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["family"], "xipolylog");
    assert_eq!(records[0]["n"], 1);
    assert_eq!(records[0]["k"], 0);
    assert_eq!(records[0]["coeff"]["re"].as_f64().unwrap(), 0.0);
    assert_eq!(records[0]["coeff"]["im"].as_f64().unwrap(), -1.0);
}

#[test]
fn gamma_table_round_trips_the_library_values() {
    let out = qahd(&["gamma-table", "--k", "1", "--grid", "0.5,1.5+0.2i"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "j,k,argument_re,argument_im,value_re,value_im"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|line| line.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    // 17 significant digits round-trip a double exactly.
    for row in &rows {
        let argument = qahd::parse_complex_literal(&format!("{}+{}i", row[2], row[3]))
            .expect("rendered argument parses back");
        let entry = qahd::gamma_assoc(row[0] as u32, argument, row[1] as u32).unwrap();
        assert_eq!(row[4], entry.value.re);
        assert_eq!(row[5], entry.value.im);
    }
}

#[test]
fn parse_errors_exit_two_with_a_byte_offset() {
    let out = qahd(&["pair", "xplus(0.5,", "--phi", "hermite:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let doc = stderr_json(&out);
    assert_eq!(doc["error"]["kind"], "parse");
    assert_eq!(doc["error"]["offset"], 10);
}

#[test]
fn pole_adjacent_degrees_exit_two() {
    let out = qahd(&["pair", "xplus(-1,0)", "--phi", "hermite:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "invalid-term");
}

#[test]
fn test_function_specs_are_validated() {
    let out = qahd(&["pair", "delta(0)", "--phi", "bogus:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "test-function");
}

#[test]
fn unreachable_quadrature_tolerance_exits_three() {
    let out = qahd(&["pair", "xplus(0.5,1)", "--phi", "hermite:1", "--tol", "1e-18"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "quadrature-failure");
}

#[test]
fn verify_scaling_passes_and_exits_zero() {
    let out = qahd(&["verify", "--law", "scaling", "xplus(0.5,1)"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["law"], "scaling");
    assert_eq!(doc["passed"], true);
    // Four default test functions times six default scales.
    assert_eq!(doc["samples"].as_array().unwrap().len(), 24);
}

#[test]
fn verify_exit_one_distinguishes_law_failure_from_errors() {
    // Even test functions cannot separate the two half-line powers.
    let out = qahd(&[
        "verify",
        "--law",
        "independence",
        "xplus(0.5,0)+xminus(0.5,0)",
        "--phi",
        "hermite:1",
        "--phi",
        "hermite:1,0,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stderr.is_empty());
    assert_eq!(stdout_json(&out)["passed"], false);
}

#[test]
fn verify_quasi_converges_on_the_default_grid() {
    let out = qahd(&["verify", "--law", "quasi", "xplus(1.5,1)", "--phi", "hermite:1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["law"], "quasi-asymptotics");
    assert_eq!(doc["passed"], true);
}

#[test]
fn verify_euler_covers_the_finite_part_chain() {
    let out = qahd(&["verify", "--law", "euler", "pfplus(2,1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], true);
}

//! End-to-end tests of the binary: exit codes, stable text goldens, the
//! JSON envelope, and text/JSON agreement on numerical content.

use std::process::{Command, Output};

use serde_json::Value;

fn deltaquot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltaquot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

#[test]
fn factor_text_golden() {
    let out = deltaquot(&["factor", "--q", "2", "--format", "text", "T^2+T"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "(T)·(T+1)\n");
}

#[test]
fn exponent_bound_golden() {
    let out = deltaquot(&[
        "exponent-bound",
        "--q",
        "3",
        "--n",
        "T^3+2T^2+T",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "192\n");
}

#[test]
fn check_unit_golden() {
    let out = deltaquot(&[
        "check-unit",
        "--q",
        "3",
        "--n",
        "T^3+2T^2+T",
        "--exponents",
        "9,-4,3,-3,4,-9",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["verdict"], Value::Bool(true));
    assert_eq!(v["S0"], "0");
    assert_eq!(v["S1"], "-192");
    assert_eq!(v["S2"], "192");
    assert_eq!(v["Sdeg"], "-20");
    assert_eq!(v["m"], "-16");
    assert_eq!(v["valuations"][0]["p"], "T");
    assert_eq!(v["valuations"][0]["sum"], "-8");
    assert_eq!(v["valuations"][1]["p"], "T+1");
    assert_eq!(v["valuations"][1]["sum"], "-12");
    for i in 0..4 {
        assert_eq!(v["T"][i], Value::Bool(true), "T{}", i + 1);
        assert_eq!(v["L"][i], Value::Bool(true), "L{}", i + 1);
    }
}

#[test]
fn json_envelope_fields() {
    let out = deltaquot(&["factor", "--q", "2", "T^2+T"]);
    let v = json(&out);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["q"], 2);
    assert_eq!(v["n"], Value::Null);
    assert_eq!(v["divisor_order"], Value::Null);
    assert_eq!(v["factorization"], "(T)·(T+1)");

    let out = deltaquot(&["exponent-bound", "--q", "3", "--n", "T^3+2T^2+T"]);
    let v = json(&out);
    assert_eq!(v["q"], 3);
    assert_eq!(v["n"], "T^3+2*T^2+T");
    let order = v["divisor_order"].as_array().expect("divisor order");
    assert_eq!(
        order
            .iter()
            .map(|d| d.as_str().unwrap())
            .collect::<Vec<_>>(),
        ["1", "T+1", "T^2+2*T+1", "T", "T^2+T", "T^3+2*T^2+T"]
    );
    assert_eq!(v["bound"], "192");
}

#[test]
fn bridge_text_and_json_agree() {
    let args = [
        "bridge",
        "--q",
        "3",
        "--n",
        "T^3+2T^2+T",
        "--divisor",
        "1:1,T^3+2T^2+T:-1",
    ];
    let text_out = deltaquot(&[&args[..], &["--format", "text"][..]].concat());
    assert_eq!(text_out.status.code(), Some(0));
    let text = stdout(&text_out);
    assert!(text.contains("raw: [18, -8, 6, -6, 8, -18] / N = 384"), "{text}");
    assert!(text.contains("reduced: [9, -4, 3, -3, 4, -9] / N = 192"), "{text}");

    let v = json(&deltaquot(&args));
    let reduced: Vec<&str> = v["reduced"]["exponents"]
        .as_array()
        .expect("exponents")
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(reduced, ["9", "-4", "3", "-3", "4", "-9"]);
    assert_eq!(v["reduced"]["N"], "192");
    assert_eq!(v["raw"]["N"], "384");
}

#[test]
fn non_monic_level_warns_on_stderr() {
    let out = deltaquot(&["orders", "--q", "3", "--n", "2T^3+T^2+2T"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stderr(&out).contains("is not monic; using T^3+2*T^2+T"),
        "stderr: {}",
        stderr(&out)
    );
    assert_eq!(json(&out)["n"], "T^3+2*T^2+T");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(deltaquot(&["nosuchcmd"]).status.code(), Some(2));
    assert_eq!(deltaquot(&["factor", "--q", "3"]).status.code(), Some(2));
    let out = deltaquot(&["factor", "--q", "3", "T^+1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"), "{}", stderr(&out));
}

#[test]
fn domain_errors_exit_3() {
    let out = deltaquot(&["field", "--q", "6"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("domain error"), "{}", stderr(&out));
    let out = deltaquot(&["check-unit", "--q", "3", "--n", "T^2", "--exponents", "1,2"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn selftest_reduced_passes() {
    let out = deltaquot(&["selftest", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("all groups passed"), "{text}");
    assert_eq!(text.matches("PASS ").count(), 9, "{text}");
}

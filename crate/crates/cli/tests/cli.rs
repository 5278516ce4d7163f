use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn spinfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinfactor"))
        .args(args)
        .env_remove("SPINFACTOR_SEED")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_spinfactor"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn decompose_cylinder_point() {
    let out = spinfactor(&["decompose", r#"{"re":[1,0,0],"im":[0,0,0.5]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((num(&v["s1"]) - 1.5).abs() < 1e-15);
    assert!((num(&v["s2"]) - 0.5).abs() < 1e-15);
    assert_eq!(v["unique"], Value::Bool(true));
}

#[test]
fn decompose_reads_stdin() {
    let out = with_stdin(&["decompose", "-"], r#"{"re":[1,0],"im":[0,1]}"#);
    assert_eq!(out.status.code(), Some(0));
    // null vector: s1 = sqrt2 |a| = 2, s2 = 0
    let v = json(&out);
    assert!((num(&v["s1"]) - 2.0).abs() < 1e-15);
    assert_eq!(num(&v["s2"]), 0.0);
}

#[test]
fn doubles_carry_seventeen_digits() {
    let out = spinfactor(&["decompose", r#"{"re":[0.1,0],"im":[0,0]}"#]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"s1\": 1.0000000000000001e-1"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(
        spinfactor(&["decompose", r#"{"re":[1,0]"#]).status.code(),
        Some(2)
    );
    assert_eq!(
        spinfactor(&["decompose", r#"{"re":[0,0],"im":[0,0]}"#])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        spinfactor(&["lorentz", "spin2", "K1", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        spinfactor(&["lorentz", "plus", "K1", "0", "--spacetime"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(spinfactor(&["section", "d1", "1"]).status.code(), Some(1));
    assert_eq!(
        spinfactor(&["--tol", "-1", "section", "d1", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(spinfactor(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        spinfactor(&["check", "no-such-suite"]).status.code(),
        Some(1)
    );
}

#[test]
fn classify_names() {
    let cases = [
        (r#"{"re":[0.5,0,0],"im":[0,0,0.5]}"#, "minimal"),
        (r#"{"re":[1,0,0],"im":[0,0,0]}"#, "maximal"),
        (r#"{"re":[0.3,0,0],"im":[0,0,0]}"#, "not-tripotent"),
    ];
    for (v, want) in cases {
        let out = spinfactor(&["classify", v]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["class"], want);
    }
}

#[test]
fn lorentz_zero_angle_is_identity() {
    let out = spinfactor(&["lorentz", "spin1", "K1", "0.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert_eq!(num(&v["re"][i][j]), want);
            assert_eq!(num(&v["im"][i][j]), 0.0);
        }
    }
}

#[test]
fn lorentz_spacetime_boost() {
    let phi: f64 = 0.7;
    let out = spinfactor(&["lorentz", "spin1", "K1", "0.7", "--spacetime"]);
    assert_eq!(out.status.code(), Some(0));
    let m = json(&out);
    assert!((num(&m[0][0]) - phi.cosh()).abs() < 1e-12);
    assert!((num(&m[1][1]) - phi.cosh()).abs() < 1e-12);
    assert!((num(&m[0][1]).abs() - phi.sinh()).abs() < 1e-12);
    assert!((num(&m[2][2]) - 1.0).abs() < 1e-12);
}

#[test]
fn verify_files() {
    let dir = std::env::temp_dir().join(format!("spinfactor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let tcar = dir.join("tcar.json");
    std::fs::write(
        &tcar,
        r#"[{"re":[1,0],"im":[0,0]},{"re":[0,1],"im":[0,0]}]"#,
    )
    .unwrap();
    let out = spinfactor(&["verify", "tcar", tcar.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], Value::Bool(true));

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"[{"re":[1,0],"im":[0,0]},{"re":[1,0],"im":[0,0]}]"#).unwrap();
    let out = spinfactor(&["verify", "tcar", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], Value::Bool(false));

    let grid = dir.join("grid.json");
    let g = r#"[{"re":[0.5,0,0,0],"im":[0,0.5,0,0]},{"re":[0.5,0,0,0],"im":[0,-0.5,0,0]},
               {"re":[0,0,0.5,0],"im":[0,0,0,0.5]},{"re":[0,0,0.5,0],"im":[0,0,0,-0.5]}]"#;
    std::fs::write(&grid, g).unwrap();
    let out = spinfactor(&["verify", "grid", grid.to_str().unwrap()]);
    assert_eq!(
        json(&out)["pass"],
        Value::Bool(true),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(out.status.code(), Some(0));

    let flipped = dir.join("flipped.json");
    std::fs::write(
        &flipped,
        g.replace(
            r#"{"re":[0,0,0.5,0],"im":[0,0,0,-0.5]}"#,
            r#"{"re":[0,0,-0.5,0],"im":[0,0,0,0.5]}"#,
        ),
    )
    .unwrap();
    let out = spinfactor(&["verify", "grid", flipped.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["violations"][0]
        .as_str()
        .unwrap()
        .starts_with("odd:"));

    let missing = dir.join("missing.json");
    assert_eq!(
        spinfactor(&["verify", "grid", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn section_csv() {
    let out = spinfactor(&["section", "dual", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,z,norm"));
    assert_eq!(lines.count(), 125);
    let out = spinfactor(&["--format", "json", "section", "d1", "3"]);
    assert_eq!(json(&out)["points"].as_array().unwrap().len(), 27);
}

#[test]
fn flow_from_origin_matches_tanh() {
    let out = spinfactor(&[
        "flow",
        r#"{"re":[1,0],"im":[0,0]}"#,
        r#"{"re":[0,0],"im":[0,0]}"#,
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // e1 is maximal with both singular values 1, so the flow is tanh(τ) e1.
    let want = 0.5f64.tanh();
    assert!((num(&v["re"][0]) - want).abs() < 1e-9);
    assert!(num(&v["re"][1]).abs() < 1e-12);
}

#[test]
fn flow_rejects_start_outside_ball() {
    let out = spinfactor(&[
        "flow",
        r#"{"re":[1,0],"im":[0,0]}"#,
        r#"{"re":[2,0],"im":[0,0]}"#,
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_main_identity_passes() {
    let out = spinfactor(&["check", "main-identity", "--trials", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["suites"][0]["passed"], 1000);
}

#[test]
fn check_output_is_reproducible() {
    let a = spinfactor(&["check", "reconstruction", "--seed", "42", "--trials", "50"]);
    let b = spinfactor(&["check", "reconstruction", "--seed", "42", "--trials", "50"]);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_spinfactor"))
        .args(["check", "reconstruction", "--trials", "50"])
        .env("SPINFACTOR_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn csv_is_refused_for_json_commands() {
    let out = spinfactor(&["--format", "csv", "decompose", r#"{"re":[1,0],"im":[0,0]}"#]);
    assert_eq!(out.status.code(), Some(2));
}

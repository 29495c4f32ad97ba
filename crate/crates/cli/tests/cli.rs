use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_bhk");

const FERMAT_J: &str =
    r#"{"variables": ["x","y","z"], "polynomial": "x^3 + y^3 + z^3", "group": [["1/3","1/3","1/3"]]}"#;
const LOOP_J: &str =
    r#"{"variables": ["x","y","z"], "polynomial": "x^2*y + y^2*z + z^2*x", "group": [["1/3","1/3","1/3"]]}"#;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn parse_fermat_cubic() {
    let out = run(&["parse", "-"], FERMAT_J);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["exponent_matrix"], json!([[3, 0, 0], [0, 3, 0], [0, 0, 3]]));
    assert_eq!(v["group"]["order"], json!(3));
}

#[test]
fn parse_rectangular_example() {
    let file = r#"{"variables": ["x0","x1","x2"], "polynomial": "x0^3*x1 + x1^2*x2"}"#;
    let v = stdout_json(&run(&["parse", "-"], file));
    assert_eq!(v["exponent_matrix"], json!([[3, 0], [1, 2], [0, 1]]));
}

#[test]
fn parse_accepts_toml() {
    let toml = "variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^3 + y^3 + z^3\"\ngroup = [[\"1/3\", \"1/3\", \"1/3\"]]\n";
    assert_eq!(run(&["parse", "-"], toml).stdout, run(&["parse", "-"], FERMAT_J).stdout);
}

#[test]
fn parse_warns_on_unused_variable() {
    let out = run(&["parse", "-"], r#"{"variables": ["x","y"], "polynomial": "x^2"}"#);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning: variable `y`"), "{}", stderr(&out));
}

#[test]
fn input_errors_exit_2() {
    let out = run(&["parse", "-"], r#"{"variables": ["x","y"], "polynomial": "x^2 + y^3 + x^2"}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("duplicate monomial"), "{}", stderr(&out));

    for bad in [
        "{",
        r#"{"variables": ["x"], "polynomial": "2*x^2"}"#,
        r#"{"variables": ["x"], "polynomial": "x^3", "group": [["1/2"]]}"#,
        r#"{"variables": ["x"], "polynomial": "x^2", "extra": 1}"#,
    ] {
        assert_eq!(run(&["parse", "-"], bad).status.code(), Some(2), "{bad}");
    }
    let out = Command::new(BIN).args(["dual", "/nonexistent/model.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["krawitz", "-"], r#"{"variables": ["x","y"], "polynomial": "x^2 + x*y + y^2"}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cy_on_diag_2_3() {
    let out = run(&["cy", "-"], r#"{"variables": ["x","y"], "polynomial": "x^2 + y^3"}"#);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["sum_matches_det"], json!(false));
    assert_eq!(v["report"]["calabi_yau"], json!(false));
}

#[test]
fn dual_of_fermat_j() {
    let v = stdout_json(&run(&["dual", "-"], FERMAT_J));
    assert_eq!(v["dual"]["gt"]["finite_order"], json!(9));
    assert_eq!(v["dual"]["gt"]["finite_divisors"], json!([3, 3]));
    assert_eq!(v["dual"]["gt"]["torus_rank"], json!(0));
}

#[test]
fn krawitz_of_fermat_j() {
    let v = stdout_json(&run(&["krawitz", "-"], FERMAT_J));
    assert_eq!(v["krawitz_dual"]["order"], json!(9));
}

#[test]
fn weights_both_sides() {
    let v = stdout_json(&run(&["weights", "--side", "dual", "-"], FERMAT_J));
    assert_eq!(v["weights"]["normalized_generator"], json!([1, 1, -1]));
    let v = stdout_json(&run(&["weights", "--side", "primal", "-"], LOOP_J));
    assert_eq!(v["weights"]["normalized_generator"], json!([1, 1, 1]));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let a = write("a.json", FERMAT_J);
    let b = write("b.json", LOOP_J);
    let c = write(
        "c.json",
        r#"{"variables": ["x","y","z"], "polynomial": "x^2*y + y^2*z + z^2*x"}"#,
    );

    let out = Command::new(BIN).args(["verify", &a, &b, "--theorem", "main"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], json!("pass"));

    let out = Command::new(BIN).args(["verify", &a, &c]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], json!("fail"));
    assert!(v["diagnostics"][0].as_str().unwrap().contains("groups differ"));

    let out = Command::new(BIN).args(["verify", &a, &b, "--theorem", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_renders_tables() {
    let out = run(&["--format", "text", "parse", "-"], FERMAT_J);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[ 3  0  0 ]"), "{text}");
    assert!(text.contains("order: 3"), "{text}");
}

#[test]
fn output_is_byte_deterministic() {
    for args in [&["dual", "-"][..], &["--seed", "5", "weights", "--side", "dual", "-"]] {
        assert_eq!(run(args, FERMAT_J).stdout, run(args, FERMAT_J).stdout);
    }
}

#[test]
fn selftest_seed_7_passes() {
    let out = Command::new(BIN).args(["selftest", "--seed", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], json!(true));
    assert_eq!(v["seed"], json!(7));
}

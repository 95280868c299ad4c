use std::io::Write;
use std::process::{Command, Output, Stdio};

const P1: &str = "new x (!x(y).x!(y) | x!(z))";

fn picomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picomp")).args(args).env_remove("PICOMP_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

#[test]
fn check_prints_the_type() {
    let o = picomp(&["check", "--calculus", "lam", r"(\x:Unit. x) *"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "Unit");
}

#[test]
fn recursive_process_is_rejected() {
    let o = picomp(&["check", "--calculus", "pi", P1]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("RecursiveDefinition"), "{}", stderr(&o));
}

#[test]
fn type_errors_carry_a_position() {
    let o = picomp(&["check", "--calculus", "lam", "(\\x:Unit. x)\n  y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnboundVariable"));
    assert!(stderr(&o).contains("at 2:3"), "{}", stderr(&o));
}

#[test]
fn parse_errors_report_line_and_column() {
    let o = picomp(&["check", "--calculus", "lam", r"(\x:Unit. x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("parse error at 1:12"), "{}", stderr(&o));
}

#[test]
fn readback_drops_annotations() {
    let o = picomp(&["readback", r"let[inf] x = \z:Ch[Unit]. z in @(x,x)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), r"(\z. z) (\z. z)");
}

#[test]
fn readback_refuses_lambda_input() {
    let o = picomp(&["readback", "--calculus", "lam", "*"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn trace_lines_have_four_columns() {
    let o = picomp(&["eval", "--format", "trace", r"(\x:Unit. x) ((\y:Unit. y) *)"]);
    assert!(o.status.success());
    let lines: Vec<Vec<String>> = stdout(&o).lines().map(|l| l.split('\t').map(str::to_string).collect()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.len() == 4));
    assert_eq!(lines[0][0], "1");
    assert_eq!(lines[1][1], "beta-v");
    assert_eq!(lines[1][3], "*");
}

#[test]
fn looping_process_exhausts_the_budget() {
    let o = picomp(&["eval", "--calculus", "pi", "--budget", "100", "--format", "summary", P1]);
    assert_eq!(stdout(&o), "BudgetExhausted steps=100");
}

#[test]
fn translations_chain_through_source_form() {
    let adm = picomp(&["adm", "--format", "source", r"(\x:Unit. x) *"]);
    assert!(adm.status.success());
    let back = picomp(&["readback", &stdout(&adm)]);
    assert_eq!(stdout(&back), r"(\x. x) *");
}

#[test]
fn cps_and_pi_roundtrip() {
    let cps = picomp(&["cps", "--format", "source", "--var", "a:Ch[Unit]", r"let[inf] f = \y:Ch[Unit]. y in @(f, a)"]);
    assert!(cps.status.success(), "{}", stderr(&cps));
    let pi = picomp(&["to-pi", "--format", "source", &stdout(&cps)]);
    assert!(pi.status.success(), "{}", stderr(&pi));
    assert!(stdout(&pi).contains("new"));
    let back = picomp(&["from-pi", "--var", "a:Ch[Unit]", "--var", "k_1:Ch[Ch[Unit] -> #b]", &stdout(&pi)]);
    assert!(back.status.success(), "{}", stderr(&back));
}

#[test]
fn stdin_and_files_are_inputs() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_picomp"))
        .args(["check", "--calculus", "lam", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br"\x:Unit. x").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "Unit -> Unit");

    let path = std::env::temp_dir().join(format!("picomp-cli-{}.lam", std::process::id()));
    std::fs::write(&path, "*").unwrap();
    let o = picomp(&["check", "--calculus", "lam", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(stdout(&o), "Unit");
}

#[test]
fn expand_internal_choice() {
    let o = picomp(&[
        "expand",
        "internal-choice",
        "--var",
        "a:Ch[Unit]",
        "--var",
        "m:Ch[Ch[Unit] -> #b]",
        "--var",
        "n:Ch[Ch[Unit] -> #b]",
        "--arg",
        "@(m, a)",
        "--arg",
        "@(n, a)",
        "--format",
        "source",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("let[1] y"), "{text}");
    assert!(text.contains("@(m, a)") && text.contains("@(n, a)"), "{text}");
}

#[test]
fn unknown_encoding_is_an_error() {
    let o = picomp(&["expand", "fork"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown encoding"));
}

#[test]
fn seed_variable_overrides_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_picomp"));
        c.args(["gen", "--format", "source", "--calculus", "adm-par", "--seed", seed]).env_remove("PICOMP_SEED");
        if let Some(v) = env {
            c.env("PICOMP_SEED", v);
        }
        stdout(&c.output().unwrap())
    };
    assert_eq!(run(Some("9"), "1"), run(None, "9"));
    assert_eq!(run(None, "4"), run(None, "4"));
}

#[test]
fn verify_summary_lines() {
    let o = picomp(&["verify", "--corpus-size", "10", "--format", "summary", "--kind", "retraction", "--kind", "termination"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "retraction 10/10 maxDepthUsed=0\ntermination 10/10 maxDepthUsed=0");
}

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laurentcc")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let value = serde_json::from_slice(&out.stdout).expect("stdout is one JSON object");
    (out.status.code().unwrap(), value)
}

#[test]
fn symbol_of_t_with_t() {
    let out = run(&["cc", "--ring", "Q", "t", "t"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value = -1"), "{}", stdout(&out));
}

#[test]
fn worked_example_values() {
    let (code, v) = json(&["bott", "--ring", "Q[e;2]", "t+e*t^-1", "t+t^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["witnesses"][0], "value = 1 + 4*e");
    let (code, v) = json(&["det", "--ring", "Q[e;2]", "t+t^2", "t+e*t^-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["witnesses"][0], "value = 1 - e");
}

#[test]
fn virasoro_table() {
    let out = run(&["virasoro", "--max", "3", "--which", "bott"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("bott (L2, L-2)\n    value = 12"), "{text}");
    assert!(text.contains("bott vanishes off n = -m"));
}

#[test]
fn report_fields() {
    let (code, v) = json(&["lie-det", "t^-2", "t^4"]);
    assert_eq!(code, 0);
    for key in ["command", "ring", "precision", "checks", "status"] {
        assert!(v.get(key).is_some(), "missing {key} in {v}");
    }
    assert_eq!(v["command"], "lie-det t^-2 t^4 --json");
    assert_eq!(v["ring"], "Q");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["checks"][0]["witnesses"][0], "value = -4");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let out = run(&["cc", "t + q", "t"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`q`") && err.contains("      ^"), "{err}");

    let (code, v) = json(&["cc", "--ring", "Z/4", "1/2", "t"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bott", "t^2", "t"]).status.code(), Some(2));
    assert_eq!(run(&["selftest", "--criterion", "12"]).status.code(), Some(2));
    assert_eq!(run(&["cc", "--ring", "Q[e;0]", "t", "t"]).status.code(), Some(2));
}

#[test]
fn probe_always_exits_0_and_is_deterministic() {
    let args = ["probe", "--trials", "6", "--seed", "3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("completed = 6 of 6"), "{}", stdout(&a));
}

#[test]
fn cocycle_defect_and_cech() {
    let out = run(&["defect", "--ring", "Z/4", "t+2*t^-1", "t+t^2", "3*t"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = run(&["cech", "--ring", "Q[e;2]", "t+e*t^-1", "t+t^2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn decompose_and_invert() {
    let (code, v) = json(&["decompose", "--ring", "Z/8", "2*t^-1+t+t^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
    let (code, v) = json(&["invert", "-N", "8", "t+t^2"]);
    assert_eq!(code, 0);
    let inverse = v["checks"][0]["witnesses"][0].as_str().unwrap();
    assert!(inverse.starts_with("inverse = t + (-1)*t^2 + 2*t^3 + (-5)*t^4 + 14*t^5"), "{inverse}");
}

#[test]
fn selftest_single_criterion() {
    let (code, v) = json(&["selftest", "--criterion", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["name"].as_str().unwrap().starts_with("1: ")));
}

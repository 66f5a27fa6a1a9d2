use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    run_with_stdin(args, None)
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_commvar"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn dims_examples() {
    let (code, out) = run(&["dims", "4", "6"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["dim_VP"].as_u64(), v["dim_N_component"].as_u64()), (Some(28), Some(27)));
    assert_eq!(json(&run(&["dims", "2", "2"]).1)["dim_N_component"], 3);
    let v = json(&run(&["dims", "1", "1"]).1);
    for key in ["dim_N_component", "dim_uP", "dim_VP", "lower_bound_nilpotent"] {
        assert_eq!(v[key], 0, "{key}");
    }
    assert_eq!(v["dim_G_component"], 1);
    assert_eq!(run(&["dims", "0", "3"]).0, 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["no-such-command"]).0, 1);
    assert_eq!(run(&["certify", "4"]).0, 1);
    assert_eq!(run(&["certify", "4", "4", "--field", "fp:9"]).0, 1);
    assert_eq!(run(&["certify", "1", "4"]).0, 1);
    assert_eq!(run(&["certify", "8", "4", "--method", "gamma"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn certify_exit_codes() {
    let (code, out) = run(&["certify", "4", "4", "--seed", "7"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["kind"], "AlgebraDim");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["budget"], 64);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["field"]["kind"], "Fp");
    assert_eq!(run(&["certify", "3", "3"]).0, 2);
    let (code, out) = run(&["certify", "4", "3", "--exact", "--method", "gamma"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["field"]["kind"], "Q");
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 5] = [
        &["certify", "6", "4", "--seed", "3"],
        &["certify", "8", "3", "--seed", "5", "--budget", "8"],
        &["sample", "5", "3", "--seed", "11", "--exact"],
        &["dims", "7", "3"],
        &["nilradical", "5", "--field", "fp:101"],
    ];
    for (k, args) in commands.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("out_{k}_{rep}"));
            let mut full = args.to_vec();
            full.extend(["--out", path.to_str().unwrap()]);
            let (code, stdout) = run(&full);
            assert!(code == 0 || code == 2, "{args:?} exited {code}");
            assert!(stdout.is_empty());
            texts.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
    }
}

#[test]
fn verify_contract() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["certify", "8", "4", "--seed", "1", "--out", p]).0, 0);
    assert_eq!(run(&["verify", p]).0, 0);

    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(run_with_stdin(&["verify", "-"], Some(&text)).0, 0);
    assert_eq!(run_with_stdin(&["verify", "-"], Some(&text[..text.len() / 2])).0, 1);
    assert_eq!(run(&["verify", dir.path().join("missing.json").to_str().unwrap()]).0, 1);

    let mut v = json(&text);
    v["witness"]["base_point"][0]["entries"][0][5] = Value::from(5);
    assert_eq!(run_with_stdin(&["verify", "-"], Some(&v.to_string())).0, 3);
    let mut v = json(&text);
    v["verdict"] = Value::from("NOT_FOUND");
    assert_eq!(run_with_stdin(&["verify", "-"], Some(&v.to_string())).0, 3);
}

#[test]
fn count_and_growth() {
    let (code, out) = run(&["count", "2", "2", "2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,r,q,count,method,elapsed_ms"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..5], ["2", "2", "2", "10", "centralizer-pruned"]);
    let (code, out) = run(&["count", "2", "2", "3", "--method", "full"]);
    assert_eq!(code, 0);
    assert!(out.contains(",33,full-enumeration,"));
    assert_eq!(run(&["count", "4", "2", "3"]).0, 4);
    assert_eq!(run(&["count", "3", "2", "2", "--method", "full"]).0, 4);
    assert_eq!(run(&["count", "3", "2", "2", "--method", "full", "--budget", "300000"]).0, 0);
    assert_eq!(run(&["count", "2", "2", "4"]).0, 1);

    let (code, out) = run(&["growth", "1", "3", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "q,count,log_q_count,dim\n2,1,0.0,0\n3,1,0.0,0\n");
}

#[test]
fn file_wrappers() {
    let (_, reg) = run(&["regular", "5"]);
    let (code, out) = run_with_stdin(&["centralizer", "-"], Some(&reg));
    assert_eq!(code, 0);
    assert_eq!(json(&out)["dim"], 5);

    let (_, up) = run(&["nilradical", "4", "--exact"]);
    let (code, out) = run_with_stdin(&["algebra-dim", "-"], Some(&up));
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["dim"], 4);
    assert_eq!(v["field"]["kind"], "Q");

    let (_, sample) = run(&["sample", "4", "2", "--seed", "3"]);
    assert_eq!(json(&sample)["seed"], 3);
    let (code, out) = run_with_stdin(&["tangent", "-"], Some(&sample));
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["commuting_tangent_dim"], 20);
    assert_eq!(v["nilpotent_commuting_tangent_dim"], 15);

    let pair = r#"{"format_version":1,"field":{"kind":"Q"},"n":2,"r":2,"mats":[
        {"rows":2,"cols":2,"entries":[[0,1],[0,0]]},
        {"rows":2,"cols":2,"entries":[[0,0],[1,0]]}]}"#;
    assert_eq!(run_with_stdin(&["tangent", "-"], Some(pair)).0, 1);
    assert_eq!(json(&run_with_stdin(&["centralizer", "-"], Some(pair)).1)["dim"], 1);
}

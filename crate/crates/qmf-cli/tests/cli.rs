use std::path::PathBuf;
use std::process::{Command, Output};

fn qmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmf")).args(args).output().expect("spawn qmf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qmf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn borcherds_table() {
    let o = qmf(&["igusa", "borcherds", "--N", "8", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for row in ["-1,2/1", "0,20/1", "3,-128/1", "4,216/1", "7,-1026/1", "8,1616/1", "1,0/1"] {
        assert!(s.lines().any(|l| l == row), "missing {row} in\n{s}");
    }
}

#[test]
fn empty_bounds_give_header_only() {
    let o = qmf(&["igusa", "borcherds", "--N", "-5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,c\n");
}

#[test]
fn invariant_table_starts_at_one() {
    let o = qmf(&["igusa", "table", "--G", "1", "--H", "1", "--D", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("g,h,d,N\n0,0,0,1/1\n"), "{s}");
}

#[test]
fn suites_pass_with_exit_zero() {
    for args in [&["check", "igusa-cross", "--H", "4", "--D", "4"][..], &["check", "kkv", "--hmax", "5", "--gmax", "6"]] {
        let o = qmf(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("0 failed"));
    }
}

#[test]
fn undecided_check_exits_one() {
    let o = qmf(&["check", "symmetry", "--H", "4", "--D", "4", "--N", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("UNDECIDED"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qmf(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(qmf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qmf(&["igusa", "table", "--format", "xml"]).status.code(), Some(2));
    let bad = scratch("bad.conf", "colour = red\n");
    assert_eq!(qmf(&["--config", bad.to_str().unwrap(), "igusa", "borcherds"]).status.code(), Some(2));
    let missing = qmf(&["graphsum", "compute", "--graph", "/nonexistent/graph.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let conf = scratch("c.conf", "# defaults\nformat = csv\nN = 0\n");
    let c = conf.to_str().unwrap();
    let o = qmf(&["--config", c, "igusa", "borcherds"]);
    assert_eq!(stdout(&o), "n,c\n-1,2/1\n0,20/1\n");
    let o = qmf(&["--config", c, "igusa", "borcherds", "--N", "-1", "--format", "text"]);
    assert_eq!(stdout(&o), " n    c\n-1  2/1\n");
}

#[test]
fn output_is_independent_of_threads() {
    let one = qmf(&["--threads", "1", "--format", "json", "check", "properties", "--G", "2", "--D", "1", "--N", "9"]);
    let two = qmf(&["--threads", "3", "--format", "json", "check", "properties", "--G", "2", "--D", "1", "--N", "9"]);
    assert_eq!(one.status.code(), Some(0), "{}", stdout(&one));
    assert_eq!(one.stdout, two.stdout);
    let a = qmf(&["--threads", "1", "igusa", "table", "--G", "2", "--H", "2", "--D", "1"]);
    let b = qmf(&["--threads", "2", "igusa", "table", "--G", "2", "--H", "2", "--D", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn graph_sum_both_methods() {
    let g = scratch("cycle.json", r#"{"n": 2, "edges": [[1, 2], [1, 2]], "sigma": [1, 2]}"#);
    let o = qmf(&["graphsum", "compute", "--graph", g.to_str().unwrap(), "--order", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    // 2 q d/dq C2 = sum 2 n sigma(n) q^n
    assert_eq!(stdout(&o), "n,direct,analytic\n0,0/1,0/1\n1,2/1,2/1\n2,12/1,12/1\n3,24/1,24/1\n4,56/1,56/1\n");
    let o = qmf(&["graphsum", "enumerate", "--graph", g.to_str().unwrap(), "--order", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("w0,w1\n"));
}

#[test]
fn out_flag_writes_file() {
    let p = std::env::temp_dir().join(format!("qmf-cli-out-{}.txt", std::process::id()));
    let o = qmf(&["--out", p.to_str().unwrap(), "qmod", "basis", "--k", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&p).unwrap(), "C2,C4,C6\n0,0,1\n1,1,0\n3,0,0\n");
}

#[test]
fn recognition_round_trip() {
    let o = qmf(&["--order", "12", "--format", "json", "qmod", "eisenstein", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    // turn the table back into a series JSON
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let terms: Vec<serde_json::Value> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| serde_json::json!({"e": [r["q"].as_str().unwrap().parse::<i32>().unwrap()], "c": r["coeff"]}))
        .collect();
    let s = serde_json::json!({"vars": ["q"], "prec": {"q": 13}, "floor": {"q": 0}, "terms": terms});
    let p = scratch("c4.json", &s.to_string());
    let o = qmf(&["qmod", "recognize", "--k", "4", "--input", p.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "poly\n(1)*C4\n");
}

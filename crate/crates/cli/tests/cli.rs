use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, content: &Value) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, content.to_string()).unwrap();
        path
    }

    fn raw(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, content).unwrap();
        path
    }
}

fn vmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vmetric"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Value {
    let out = vmetric(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p(path: &PathBuf) -> &str {
    path.to_str().unwrap()
}

fn values(ints: &[&str]) -> Value {
    json!({ "values": ints })
}

fn triangle(third: &str, dy: &str, dyp: &str) -> Value {
    json!({
        "labels": ["y", "y'", third],
        "dist": [["0", "4", dy], ["4", "0", dyp], [dy, dyp, "0"]],
    })
}

#[test]
fn four_values_golden() {
    let sb = Sandbox::new();
    let v = sb.file("v.json", &values(&["0", "1", "3", "4", "5"]));
    let out = vmetric(&["check-4vc", p(&v)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"result\":\"counterexample\",\"quad\":[\"1\",\"5\",\"1\",\"3\"]}\n"
    );
    let good = sb.file("g.json", &values(&["0", "1", "3", "5"]));
    assert_eq!(ok(&["check-4vc", p(&good)]), json!({"result": "holds"}));
}

#[test]
fn amalgamating_the_triangles() {
    let sb = Sandbox::new();
    let m1 = sb.file("m1.json", &triangle("x1", "1", "5"));
    let m2 = sb.file("m2.json", &triangle("x2", "1", "3"));
    let full = sb.file("v.json", &values(&["0", "1", "2", "3", "4", "5"]));
    let out = ok(&["amalgamate", p(&m1), p(&m2), "-V", p(&full)]);
    assert_eq!(out["chosen"], json!([["x1", "x2", "2"]]));
    assert_eq!(out["space"]["dist"][2][3], json!("2"));

    let holed = sb.file("h.json", &values(&["0", "1", "3", "4", "5"]));
    let out = vmetric(&["amalgamate", p(&m1), p(&m2), "-V", p(&holed)]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"], json!("no_amalgam"));
}

#[test]
fn dstar_fixes_ultrametrics() {
    let sb = Sandbox::new();
    let u = json!({"labels": ["a", "b", "c"], "dist": [["0", "1", "2"], ["1", "0", "2"], ["2", "2", "0"]]});
    let f = sb.file("u.json", &u);
    assert_eq!(ok(&["dstar", p(&f)]), u);
}

#[test]
fn exit_codes() {
    let sb = Sandbox::new();
    let bad = sb.raw("bad.json", "{");
    assert_eq!(vmetric(&["validate", p(&bad)]).status.code(), Some(2));
    assert_eq!(vmetric(&["no-such-command"]).status.code(), Some(2));
    let v = sb.file("v.json", &values(&["0", "1"]));
    assert_eq!(
        vmetric(&["build-urysohn", "-V", p(&v), "--max-points", "4"])
            .status
            .code(),
        Some(2)
    );
    let broken = sb.file("t.json", &json!({"labels": ["a", "b", "c"], "dist": [["0", "1", "5"], ["1", "0", "1"], ["5", "1", "0"]]}));
    let out = vmetric(&["validate", p(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"], json!("triangle_violation"));
    let no_zero = sb.file("z.json", &values(&["1"]));
    assert_eq!(vmetric(&["gaps", p(&no_zero)]).status.code(), Some(1));
}

#[test]
fn urysohn_is_seeded() {
    let sb = Sandbox::new();
    let v = sb.file("v.json", &values(&["0", "1", "2"]));
    let run = |seed: &str| {
        vmetric(&[
            "build-urysohn",
            "-V",
            p(&v),
            "--max-points",
            "8",
            "--seed",
            seed,
        ])
        .stdout
    };
    assert_eq!(run("5"), run("5"));
    let out: Value = serde_json::from_slice(&run("5")).unwrap();
    assert_eq!(out["space"]["labels"].as_array().unwrap().len(), 8);
}

#[test]
fn jobs_do_not_change_output() {
    let sb = Sandbox::new();
    let line = ok(&["fixture", "line", "--points", "0,1,2,3,4,5,6,7,8,9"]);
    let small = ok(&["fixture", "line", "--points", "0,1,3"]);
    let (big, small) = (sb.file("big.json", &line), sb.file("small.json", &small));
    let one = vmetric(&["embed", p(&small), p(&big), "--jobs", "1"]).stdout;
    let four = vmetric(&["embed", p(&small), p(&big), "--jobs", "4"]).stdout;
    assert_eq!(one, four);
    let parsed: Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(parsed["count"], json!(14));
}

#[test]
fn trees_and_dot() {
    let sb = Sandbox::new();
    let spec = sb.file(
        "spec.json",
        &json!({"weights": ["2", "1"], "degrees": [2, 2]}),
    );
    let space = ok(&["omega-gen", p(&spec)]);
    let f = sb.file("s.json", &space);
    let tree = ok(&["nerve", p(&f)]);
    let t = sb.file("t.json", &tree);
    let back = ok(&["tree2space", p(&t)]);
    assert_eq!(back["labels"].as_array().unwrap().len(), 4);
    assert_eq!(ok(&["homog-check", p(&t)]), json!({"result": "holds"}));
    assert_eq!(ok(&["homog-check", p(&f)]), json!({"result": "holds"}));
    let dot = vmetric(&["nerve", p(&f), "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout)
        .unwrap()
        .starts_with("digraph tree {"));
    let blocks = ok(&["omega-gen", p(&spec), "--level", "0"]);
    let part = sb.file("part.json", &blocks);
    let exp = ok(&["experiment", p(&f), p(&part)]);
    assert_eq!(exp["divisible"], json!(true));
    let greedy = ok(&["greedy-mono", p(&f), p(&part)]);
    assert_eq!(greedy["result"], json!("witness"));
}

#[test]
fn divide_commands() {
    let sb = Sandbox::new();
    let pts: Vec<String> = (0..=100).map(|k| k.to_string()).collect();
    let line = ok(&["fixture", "line", "--points", &pts.join(",")]);
    let f = sb.file("line.json", &line);
    let rep = ok(&["unbounded-partition", p(&f), "--a0", "0"]);
    assert_eq!(rep["r_seq"], json!(["0", "2", "8", "26", "80"]));
    assert_eq!(
        ok(&["ring", p(&f), "--center", "0", "--lo", "1", "--hi", "3"]),
        json!({"points": ["1", "2"]})
    );

    let small = sb.file(
        "small.json",
        &ok(&["fixture", "line", "--points", "0,1/8,1"]),
    );
    let cover = ok(&["cover", p(&small), "--lambda", "1/2"]);
    assert_eq!(cover["balls"][0]["radius"], json!("3/16"));
    let part = ok(&["partition", p(&small), "--lambda", "1/2"]);
    assert_eq!(part["odd"], json!(["0", "1/8", "1"]));
    let st = ok(&["stripes", p(&small), "--center", "0", "--l", "1"]);
    assert_eq!(st, json!({"even": [], "odd": ["0", "1/8"]}));

    let w = sb.file("w.json", &values(&["0", "1"]));
    let clique = sb.file("k.json", &json!({"labels": ["a", "b", "c"], "dist": [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]]}));
    let sc = ok(&["scatter", p(&clique), "-W", p(&w)]);
    assert_eq!(sc["sub_scattered"], json!(false));
    assert_eq!(
        ok(&["eps-comp", p(&clique), "--eps", "1"]),
        json!({"blocks": [["a", "b", "c"]]})
    );
    assert_eq!(
        ok(&["lambda", p(&clique), "--point", "a"])["lambda"],
        json!("0")
    );
    assert_eq!(
        ok(&["cantor", p(&clique)])["cantor_connected"],
        json!(false)
    );
}

#[test]
fn remaining_commands() {
    let sb = Sandbox::new();
    let v = sb.file("v.json", &values(&["0", "1", "2"]));
    let dv = ok(&["dv", p(&v)]);
    assert_eq!(dv["table"].as_array().unwrap().len(), 3);
    assert_eq!(ok(&["dv", p(&v), "--x", "1", "--y", "2"])["dv"], json!("1"));
    assert!(ok(&["gaps", p(&v)]).is_object());

    let mn = ok(&["fixture", "mn", "--n", "2"]);
    let f = sb.file("mn.json", &mn);
    let checked = ok(&["validate", p(&f)]);
    assert_eq!(checked["valid"], json!(true));
    let chain = ok(&["fixture", "chain", "-V", p(&v), "--ell", "2", "--n", "2"]);
    assert_eq!(chain["labels"], json!(["x0", "x1", "x2"]));

    let pair = sb.file("pair.json", &ok(&["fixture", "line", "--points", "0,1"]));
    let square = ok(&["fixture", "sup-power", p(&pair), "--n", "2"]);
    assert_eq!(square["labels"].as_array().unwrap().len(), 4);

    let socket = sb.file("s.json", &json!({"entries": [{"b": "0", "d": "2"}]}));
    let realized = ok(&["socket-realize", p(&pair), p(&socket), "-V", p(&v)]);
    assert_eq!(realized["point"], json!("p2"));
    let orbit = ok(&[
        "socket-realize",
        p(&pair),
        p(&socket),
        "-V",
        p(&v),
        "--orbit-only",
    ]);
    assert_eq!(orbit, json!({"valid": true, "orbit": []}));

    let spec = sb.file(
        "spec.json",
        &json!({"weights": ["2", "1"], "degrees": [2, 2]}),
    );
    let om = sb.file("om.json", &ok(&["omega-gen", p(&spec)]));
    let indiv = ok(&["indiv-report", p(&om), "--cap", "2"]);
    assert_eq!(indiv["candidate"], json!(true));
    let up = ok(&["ultra-partition", p(&om), "--a", "(0,0)", "--r", "0,1,2"]);
    assert_eq!(up["even"], json!(["(0,0)", "(1,0)"]));

    // Output re-parses as input.
    let star = sb.file("star.json", &ok(&["dstar", p(&f)]));
    assert_eq!(ok(&["validate", p(&star)])["points"], checked["points"]);
}

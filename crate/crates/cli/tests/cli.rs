use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn chipfire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chipfire"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = chipfire(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("one JSON record")
}

fn code(args: &[&str]) -> i32 {
    chipfire(args).status.code().unwrap()
}

#[test]
fn info_on_fixtures() {
    let g2 = json(&["info", "--graph", &fixture("g2.txt")]);
    assert_eq!(g2["minfas"], 2);
    assert_eq!(g2["dist0"], 2);
    assert_eq!(g2["pic0_order"], 2);
    assert_eq!(g2["eulerian"], true);

    let c3 = json(&["info", "--graph", &fixture("c3.txt")]);
    assert_eq!(c3["minfas"], 1);
    assert_eq!(c3["dist0"], 1);

    let g3 = json(&["info", "--graph", &fixture("g3.txt")]);
    assert_eq!(g3["eulerian"], false);
    assert_eq!(g3["arcs"], 8);
    assert_eq!(g3["termination_bound"], 4);
}

#[test]
fn queries() {
    let g3 = fixture("g3.txt");
    let t = json(&["terminates", "--graph", &g3, "--dist", "0,0,1,3"]);
    assert_eq!(t["verdict"], "terminating");
    let t = json(&["terminates", "--graph", &g3, "--dist", "0,0,2,2"]);
    assert_eq!(t["verdict"], "non-terminating");
    let e = json(&[
        "equivalent",
        "--graph",
        &g3,
        "--dist",
        "2,0,0,6",
        "--dist2",
        "2,1,2,3",
    ]);
    assert_eq!(e["equivalent"], true);
    assert_eq!(json(&["natural-rr", "--graph", &g3])["holds"], true);

    let g2 = fixture("g2.txt");
    assert_eq!(json(&["natural-rr", "--graph", &g2])["holds"], false);
    assert_eq!(
        json(&["dist", "--graph", &g2, "--dist", "0,0,0,0"])["value"],
        2
    );
    let c = json(&["canonical", "--graph", &g2, "--dist", "4,0,0,0"]);
    assert_eq!(c["canonical"], json(&["rr-check", "--graph", &g2])["K"]);
    let classes = json(&["classes", "--graph", &g2, "--degree", "-1"]);
    assert_eq!(classes["classes"].as_array().unwrap().len(), 2);
    let k2 = fixture("k2.txt");
    assert_eq!(json(&["rank", "--graph", &k2, "--dist", "0,0"])["rank"], 0);
    assert_eq!(
        json(&["minfas", "--graph", &fixture("c5.txt")])["minfas"],
        1
    );
}

#[test]
fn g1_has_two_mnt_degrees() {
    let r = json(&["rr-check", "--graph", &fixture("g1.txt")]);
    assert_eq!(r["holds"], false);
    assert_eq!(r["failure_reason"]["kind"], "degree-spread");
    assert_eq!(r["failure_reason"]["degrees"], serde_json::json!([4, 5]));
}

#[test]
fn run_reports_the_state_cycle() {
    let r = json(&["run", "--graph", &fixture("c3.txt"), "--dist", "1,0,0"]);
    assert_eq!(r["outcome"], "cycle-detected");
    assert_eq!(r["cycle_length"], 3);
    let r = json(&["run", "--graph", &fixture("g3.txt"), "--dist", "0,0,1,3"]);
    assert_eq!(r["outcome"], "terminated");
    let text = chipfire(&["run", "--graph", &fixture("c3.txt"), "--dist", "1,0,0"]);
    assert!(String::from_utf8(text.stdout)
        .unwrap()
        .contains("step 1: fire 0 -> 0,1,0"));
}

#[test]
fn verify_sweeps_pass() {
    let r = json(&[
        "verify",
        "undirected-rr",
        "--random-graphs",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["graphs"], 50);
    let r = json(&["verify", "eulerian-weak-rr", "--graph", &fixture("g2.txt")]);
    assert_eq!(r["status"], "pass");
    let r = json(&["verify", "abelian", "--graph", &fixture("c3.txt")]);
    assert_eq!(r["status"], "pass");
    for p in [
        "gallai",
        "minfas-turnback",
        "dist-invariance",
        "turnback-characterization",
        "acyclic-characterization",
        "rr-formula",
    ] {
        let r = json(&[
            "verify",
            p,
            "--random-graphs",
            "3",
            "--trials",
            "5",
            "--seed",
            "1",
        ]);
        assert_eq!(r["status"], "pass", "{p}: {r}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify",
        "dist-invariance",
        "--random-graphs",
        "4",
        "--trials",
        "10",
        "--seed",
        "3",
        "--format",
        "json",
    ];
    assert_eq!(chipfire(&args).stdout, chipfire(&args).stdout);
    let g1 = fixture("g1.txt");
    let args = ["mnt", "--graph", g1.as_str()];
    assert_eq!(chipfire(&args).stdout, chipfire(&args).stdout);
    let a = chipfire(&[
        "verify",
        "abelian",
        "--random-graphs",
        "3",
        "--seed",
        "1",
        "--format",
        "json",
    ]);
    let b = chipfire(&[
        "verify",
        "abelian",
        "--random-graphs",
        "3",
        "--seed",
        "2",
        "--format",
        "json",
    ]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let g2 = fixture("g2.txt");
    assert_eq!(code(&["info", "--graph", &g2]), 0);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["dist", "--graph", &g2]), 2);
    assert_eq!(code(&["info"]), 2);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["verify", "no-such-property"]), 2);
    assert_eq!(code(&["dist", "--graph", &g2, "--dist", "1,2"]), 3);
    assert_eq!(code(&["dist", "--graph", &g2, "--dist", "1,x,0,0"]), 3);
    assert_eq!(code(&["info", "--graph", "/nonexistent/graph.txt"]), 3);
    assert_eq!(code(&["verify", "undirected-rr", "--graph", &g2]), 3);
    assert_eq!(
        code(&[
            "mnt",
            "--graph",
            &fixture("g1.txt"),
            "--max-candidates",
            "10"
        ]),
        4
    );
    assert_eq!(
        code(&[
            "run",
            "--graph",
            &fixture("c3.txt"),
            "--dist",
            "1,0,0",
            "--step-limit",
            "1"
        ]),
        4
    );
}

#[test]
fn parse_errors_name_the_line() {
    let dir = std::env::temp_dir().join(format!("chipfire-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "digraph 3\n0 1\n1 1\n").unwrap();
    let out = chipfire(&["info", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn disconnected_graphs_report_but_do_not_play() {
    let dir = std::env::temp_dir().join(format!("chipfire-cli-dc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("path.txt");
    std::fs::write(&path, "digraph 2\n0 1\n").unwrap();
    let p = path.to_str().unwrap();
    let info = json(&["info", "--graph", p]);
    assert_eq!(info["strongly_connected"], false);
    assert_eq!(info["dist0"], Value::Null);
    assert_eq!(code(&["dist", "--graph", p, "--dist", "0,0"]), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

use std::process::{Command, Output};

use serde_json::Value;

const U: [&str; 4] = ["--p", "0.5,0,0.1,0", "--q", "-0.5,0,0.05,0"];
const E1: [&str; 4] = ["--p", "0.1,0,0.5,0", "--q", "0.5,0,0.1,0"];

fn bidisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bidisc"))
        .args(args)
        .env_remove("BIDISC_SEED")
        .env_remove("BIDISC_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/tests/fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

#[test]
fn solve_u_matches_golden() {
    let out = bidisc(&["solve", U[0], U[1], U[2], U[3]]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout.clone()).unwrap(),
        fixture("solve_u.json")
    );
    let doc = json(&out);
    assert_eq!(doc["schema"], "bidisc.solve/1");
    assert_eq!(doc["region"], "U");
    assert!((doc["value_log"].as_f64().unwrap() + 1.386294).abs() < 1e-6);
    assert_eq!(doc["value_modulus"].as_f64().unwrap(), 0.25);
}

#[test]
fn classify_matches_golden() {
    let out = bidisc(&["classify", E1[0], E1[1], E1[2], E1[3]]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        fixture("classify_e1.json")
    );
    let u = json(&bidisc(&["classify", U[0], U[1], U[2], U[3]]));
    assert_eq!(u["region"], "U");
    let diag = json(&bidisc(&[
        "classify",
        "--p",
        "0.3,0,0.2,0",
        "--q",
        "0.3,0,0.2,0",
    ]));
    assert_eq!(diag["region"], "DIAGONAL");
}

#[test]
fn sweep_matches_golden_and_is_deterministic() {
    let args = [
        "sweep",
        U[0],
        U[1],
        U[2],
        U[3],
        "--i-axis",
        "p1re=0.4:0.6",
        "--j-axis",
        "q2im=-0.2:0.2",
        "--resolution",
        "2,2",
    ];
    let out = bidisc(&args);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv, fixture("sweep_u.csv"));
    assert_eq!(csv.lines().count(), 5);
    assert!(csv
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(10) == Some("U")));

    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("atlas{threads}.csv"));
        let grid = [
            "sweep",
            E1[0],
            E1[1],
            E1[2],
            E1[3],
            "--i-axis",
            "p1re=-0.6:0.6",
            "--j-axis",
            "q2re=-0.5:0.5",
            "--resolution",
            "4,3",
            "--threads",
            threads,
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ];
        assert_eq!(bidisc(&grid).status.code(), Some(0));
        files.push(std::fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn sweep_across_the_thin_set_marks_a_band() {
    // p1 crosses q1 = 0.5 in the middle row
    let out = bidisc(&[
        "sweep",
        "--p",
        "0.3,0,0.1,0",
        "--q",
        "0.5,0,-0.4,0.2",
        "--i-axis",
        "p1re=0.3:0.7",
        "--j-axis",
        "p2im=-0.2:0.2",
        "--resolution",
        "5,3",
        "--eps",
        "1e-6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let regions: Vec<(usize, String)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[10].to_string())
        })
        .collect();
    for (i, r) in &regions {
        assert_eq!(*i == 2, r == "THIN_A", "row {i}: {r}");
    }
}

#[test]
fn invalid_inputs_exit_one_with_tags() {
    let out = bidisc(&["solve", "--p", "0.3,0,0.2,0", "--q", "0.3,0,0.2,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["tag"], "DIAGONAL_POLES");

    let out = bidisc(&["solve", "--p", "1.3,0,0.2,0", "--q", "0.3,0,0.2,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["tag"], "INVALID_POINT");

    let out = bidisc(&[
        "solve",
        "--z",
        "0.3,0,0.2,0",
        "--p",
        "0.3,0,0.2,0",
        "--q",
        "0.1,0,0.2,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["tag"], "POLE_AT_BASE");

    let out = bidisc(&["solve", "--p", "0.3,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["tag"], "USAGE");

    let out = bidisc(&["classify", "--p", "0.3,0,2,0", "--q", "0.3,0,0.2,0"]);
    assert_eq!(out.status.code(), Some(1));

    let out = bidisc(&[
        "sweep",
        U[0],
        U[1],
        U[2],
        U[3],
        "--i-axis",
        "p1re=0:0.5",
        "--j-axis",
        "q1re=0:0.5",
        "--resolution",
        "2,2",
        "--out",
        "/nonexistent-dir/atlas.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thin_pair_exits_with_fallback() {
    let out = bidisc(&["solve", "--p", "0.5,0,0.1,0", "--q", "0.5,0,0.3,0.2"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["status"], "FALLBACK");
    assert!(doc["certificate"]["fallback"]["spread"].as_f64().unwrap() < 1e-5);
}

#[test]
fn oracle_sandwich_closes_on_an_extremal_pair() {
    let out = bidisc(&["solve", E1[0], E1[1], E1[2], E1[3], "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["region"], "E1");
    let width = doc["sandwich"]["width"].as_f64().unwrap();
    assert!(width.abs() < 1e-6, "{width}");
}

#[test]
fn seed_flag_and_env_agree() {
    let flag = bidisc(&["solve", E1[0], E1[1], E1[2], E1[3], "--seed", "42"]);
    let env = Command::new(env!("CARGO_BIN_EXE_bidisc"))
        .args(["solve", E1[0], E1[1], E1[2], E1[3]])
        .env("BIDISC_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    assert_eq!(json(&flag)["certificate"]["seed"], 42);
    assert_eq!(
        bidisc(&["solve", E1[0], E1[1], E1[2], E1[3], "--seed", "42"]).stdout,
        flag.stdout
    );
}

#[test]
fn selftest_quick_passes() {
    let out = bidisc(&["selftest", "--quick"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        bidisc::selftest::suite_names().count()
    );
}

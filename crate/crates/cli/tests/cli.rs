use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdlab"))
        .args(args)
        .env_remove("QDLAB_SEED")
        .env_remove("QDLAB_OUT_DIR")
        .output()
        .expect("qdlab runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn suites_pass_and_list_anchors() {
    for name in [
        "identities",
        "conjugates",
        "episums",
        "fitzpatrick",
        "quasidensity",
        "gallery",
    ] {
        let out = qdlab(&["suite", name, "--seed", "7"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "suite {name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let report = json(&out);
        assert_eq!(report["pass"], true);
        for row in report["rows"].as_array().unwrap() {
            assert!(!row["anchor"].as_str().unwrap().is_empty());
            assert!(row["residual"].as_f64().unwrap() <= row["tolerance"].as_f64().unwrap());
        }
    }
}

#[test]
fn identities_report_named_rows() {
    let report = json(&qdlab(&["suite", "identities", "--seed", "7"]));
    let anchors: Vec<&str> = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["anchor"].as_str().unwrap())
        .collect();
    for a in ["RL2", "QD2", "BB1", "RLlem"] {
        assert!(anchors.contains(&a), "missing {a}");
    }
}

#[test]
fn gallery_suite_has_both_bounds() {
    let out = qdlab(&["suite", "gallery", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.contains(">= 1/10") && l.ends_with("true")));
    assert!(text
        .lines()
        .any(|l| l.contains(">= 1/4") && l.ends_with("true")));
}

#[test]
fn relaxed_tolerance_still_passes() {
    assert_eq!(
        qdlab(&["suite", "all", "--tol-opt", "1e-3"]).status.code(),
        Some(0)
    );
}

#[test]
fn reports_are_byte_identical() {
    let a = qdlab(&["suite", "all", "--seed", "3"]);
    let b = qdlab(&["suite", "all", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let c = qdlab(&[
        "gallery",
        "bstele",
        "--samples",
        "50",
        "--seed",
        "3",
        "--format",
        "csv",
    ]);
    let d = qdlab(&[
        "gallery",
        "bstele",
        "--samples",
        "50",
        "--seed",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(
        qdlab(&["suite", "identities", "--tol-exact=-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qdlab(&["suite", "identities", "--truncation", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qdlab(&["suite", "bogus"]).status.code(), Some(2));
    assert_eq!(
        qdlab(&["probe", "--operator", "nonexistent", "--point", "[1,0]"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qdlab(&["sum-theorem", "--grid=-1:1:0.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn probe_examples() {
    let dir = tempfile::tempdir().unwrap();
    let points: Vec<String> = (-64..=64)
        .map(|k| format!("[{}, {}]", k as f64 / 16.0, -k as f64 / 16.0))
        .collect();
    let anti = write(
        dir.path(),
        "anti.json",
        &format!(r#"{{"repr":"cloud","points":[{}]}}"#, points.join(",")),
    );
    let probes = write(dir.path(), "p.json", "[[1, 0]]");
    let out = qdlab(&["probe", "--operator", &anti, "--points", &probes]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["certificates"][0]["verdict"]["not_quasidense"], 0.5);
    assert_eq!(r["summary"]["not_quasidense"], 1);

    let lin = write(
        dir.path(),
        "lin.json",
        r#"{"repr":"linear","matrix":[[1]]}"#,
    );
    let r = json(&qdlab(&["probe", "--operator", &lin, "--points", &probes]));
    assert_eq!(r["certificates"][0]["verdict"], "quasidense_evidence");
    assert!(r["certificates"][0]["inf_estimate"].as_f64().unwrap() <= 1e-10);

    let r = json(&qdlab(&[
        "probe",
        "--operator",
        "skewq",
        "--point",
        "[[1], []]",
    ]));
    assert_eq!(r["certificates"][0]["verdict"]["not_quasidense"], 0.1);
    assert!(r["certificates"][0]["inf_estimate"].as_f64().unwrap() >= 0.1 - 1e-9);
}

#[test]
fn parse_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"repr\": \"linear\",\n \"matrix\": [[1,]]}",
    );
    let out = qdlab(&["probe", "--operator", &bad, "--point", "[1,0]"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":2:"), "{err}");
    let unknown = write(
        dir.path(),
        "u.json",
        r#"{"repr":"linear","matrix":[[1]],"extra":1}"#,
    );
    assert_eq!(
        qdlab(&["probe", "--operator", &unknown, "--point", "[1,0]"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn environment_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_qdlab"))
            .args([
                "gallery",
                "skewq",
                "--samples",
                "5",
                "--out",
                "g.csv",
                "--format",
                "csv",
            ])
            .env("QDLAB_SEED", seed)
            .env("QDLAB_OUT_DIR", dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(run("11").status.code(), Some(0));
    let first = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert!(first.starts_with("sample,r_l,lower,slack\n"));
    run("12");
    let second = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert_ne!(first, second);
    let flag = qdlab(&[
        "gallery",
        "skewq",
        "--samples",
        "5",
        "--seed",
        "11",
        "--format",
        "csv",
    ]);
    assert_eq!(String::from_utf8(flag.stdout).unwrap(), first);

    let out = Command::new(env!("CARGO_BIN_EXE_qdlab"))
        .args(["suite", "identities"])
        .env("QDLAB_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("suite-identities.json").exists());
}

#[test]
fn conjugate_command() {
    let dir = tempfile::tempdir().unwrap();
    let values: Vec<String> = (0..=16)
        .map(|i| {
            let x = -2.0 + 0.25 * i as f64;
            format!("{}", 0.5 * x * x)
        })
        .collect();
    let body = format!(
        r#"{{"axes":[{{"min":-2.0,"max":2.0,"step":0.25}}],"values":[{}]}}"#,
        values.join(",")
    );
    let grid = write(dir.path(), "f.json", &body);
    let out = qdlab(&["conjugate", &grid, "--grid=-1:1:0.25"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let g = json(&out);
    let vals: Vec<f64> = g["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for (i, v) in vals.iter().enumerate() {
        let y = -1.0 + 0.25 * i as f64;
        assert!((v - 0.5 * y * y).abs() <= 1e-12);
    }
    let env = qdlab(&["conjugate", &grid, "--envelope", "--format", "csv"]);
    assert_eq!(env.status.code(), Some(0));
}

#[test]
fn sum_theorem_default_grid() {
    let out = qdlab(&["sum-theorem"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|row| row["anchor"] == "DD1" || row["anchor"] == "Dthm"));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

fn zqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zqlab"))
        .args(args)
        .output()
        .expect("run zqlab")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zqlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "zqlab failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header names without type tags, and the data rows.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.split('[').next().unwrap().to_string())
        .collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn column<'a>(header: &[String], row: &'a [String], name: &str) -> &'a str {
    &row[header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))]
}

fn rational(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap()),
        None => BigRational::from_integer(s.parse().unwrap()),
    }
}

#[test]
fn output_is_identical_across_thread_counts() {
    let run = |threads: &str| {
        stdout(&zqlab(&[
            "dot-incidence",
            "--seed",
            "11",
            "--trials",
            "4",
            "--threads",
            threads,
            "--set",
            "moduli=5,7,15",
        ]))
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
    let other = stdout(&zqlab(&[
        "dot-incidence",
        "--seed",
        "12",
        "--trials",
        "4",
        "--set",
        "moduli=5,7,15",
    ]));
    assert_ne!(one, other);
}

#[test]
fn dot_sweep_has_one_record_per_trial_and_holds() {
    let text = stdout(&zqlab(&[
        "dot-incidence",
        "--trials",
        "10",
        "--set",
        "moduli=5,7",
        "--set",
        "n=2",
    ]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let slack: f64 = column(&header, r, "slack").parse().unwrap();
        assert!(slack >= 1.0);
    }
    assert!(text
        .lines()
        .last()
        .unwrap()
        .starts_with("# summary records=20 hard_checks=20 hard_failures=0 min_slack="));
}

#[test]
fn slack_recomputes_from_its_own_columns() {
    for exp in ["dot-incidence", "det-incidence", "crossratio-incidence"] {
        let text = stdout(&zqlab(&[exp, "--trials", "5", "--seed", "3"]));
        let (header, rows) = parse_csv(&text);
        assert!(!rows.is_empty());
        for r in &rows {
            let count = rational(column(&header, r, "count"));
            let main = match exp {
                "det-incidence" => rational(column(&header, r, "main_over_q")),
                _ => rational(column(&header, r, "main_term")),
            };
            let mut lhs = (count - main).abs();
            if exp == "det-incidence" {
                lhs /= BigRational::from_integer(8.into());
            }
            assert_eq!(lhs, rational(column(&header, r, "error_lhs")));
            let rhs: f64 = column(&header, r, "bound_rhs").parse().unwrap();
            let slack: f64 = column(&header, r, "slack").parse().unwrap();
            let lhs = lhs.to_f64().unwrap();
            if lhs == 0.0 {
                assert!(slack.is_infinite());
            } else {
                assert!((slack - rhs / lhs).abs() <= 1e-12 * slack);
            }
        }
    }
}

#[test]
fn zaremba_lists_small_set() {
    let text = stdout(&zqlab(&["zaremba", "--set", "moduli=7", "--set", "max_quotient=3"]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(column(&header, &rows[0], "members"), "2 3 4 5");
    assert_eq!(column(&header, &rows[0], "size"), "4");
}

#[test]
fn empty_sweep_is_header_only() {
    let text = stdout(&zqlab(&["dot-incidence", "--set", "moduli="]));
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("trial[int],q[int],n[int],lambda[int]"));
}

#[test]
fn writes_output_and_schema_files() {
    let out = scratch("energy.json");
    let o = zqlab(&[
        "energy",
        "--trials",
        "2",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["experiment"], "energy");
    assert_eq!(doc["records"].as_array().unwrap().len(), 6);
    assert_eq!(doc["summary"]["hard_failures"], 0);
    let schema = std::fs::read_to_string(Path::new(&format!("{}.schema.txt", out.display()))).unwrap();
    assert!(schema.contains("energy_balanced\trational\t"));
}

#[test]
fn config_file_and_overrides() {
    let cfg = scratch("kl.cfg");
    std::fs::write(
        &cfg,
        "experiment = kloosterman\ntrials = 2\nmoduli = 7, 11 # primes\nm = 0\n",
    )
    .unwrap();
    let text = stdout(&zqlab(&[
        "kloosterman",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "n=1",
        "--timing",
    ]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 4);
    assert_eq!(header.last().unwrap(), "wall_ms");
    for r in &rows {
        let p: f64 = column(&header, r, "p").parse().unwrap();
        let abs: f64 = column(&header, r, "abs").parse().unwrap();
        assert!((abs - p.sqrt()).abs() < 1e-8 || column(&header, r, "principal") == "true");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(zqlab(&["zaremba", "--set", "bogus=1"]).status.code(), Some(2));
    assert_eq!(zqlab(&["det-incidence", "--set", "moduli=9"]).status.code(), Some(2));
    assert_eq!(zqlab(&["spectrum", "--matrix-cap", "3"]).status.code(), Some(2));
    let missing = scratch("missing.cfg");
    assert_eq!(
        zqlab(&["energy", "--config", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let blocked = scratch("file");
    std::fs::write(&blocked, "").unwrap();
    let out = blocked.join("out.csv");
    let o = zqlab(&["zaremba", "--set", "moduli=7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("file"));
    // zero tolerance splits every eigenvalue cluster, so the multiplicity law fails
    let o = zqlab(&["spectrum", "--set", "moduli=13", "--set", "cluster_tol=0"]);
    assert_eq!(o.status.code(), Some(1));
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mus::fixtures;
use mus::io::{parse_dense_csv, write_dense_csv};
use mus::{Tolerance, ZeroPattern};
use tempfile::TempDir;

fn mus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = mus(&["fixtures", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    dir
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn run(dir: &Path, fixture: &str, m_bar: &str, format: &str) -> Output {
    mus(&[
        "run",
        "--matrix",
        &path(dir, &format!("{fixture}.csv")),
        "--groups",
        &path(dir, &format!("{fixture}_groups.csv")),
        "--m-bar",
        m_bar,
        "--format",
        format,
    ])
}

#[test]
fn fixtures_listing() {
    let out = mus(&["fixtures"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("fig1") && text.contains("tennis"), "{text}");
}

#[test]
fn tennis_run_text() {
    let dir = fixture_dir();
    let out = run(dir.path(), "tennis", "3", "text");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("maxima: 6, 8"), "{text}");
    assert!(text.contains("identity_verified: true"));
}

#[test]
fn fig1_run_json() {
    let dir = fixture_dir();
    let out = run(dir.path(), "fig1", "2", "json");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["maxima"], serde_json::json!([2, 6, 9]));
    assert_eq!(v["identity_verified"], true);
    assert_eq!(v["groups"][1]["count"], 6);
}

#[test]
fn output_formats_carry_identical_numbers() {
    let dir = fixture_dir();
    for (fixture, m_bar) in [("fig1", "2"), ("tennis", "3")] {
        let json: serde_json::Value =
            serde_json::from_str(&stdout(&run(dir.path(), fixture, m_bar, "json"))).unwrap();
        let csv = stdout(&run(dir.path(), fixture, m_bar, "csv"));
        let text = stdout(&run(dir.path(), fixture, m_bar, "text"));

        let mut from_json = Vec::new();
        for g in json["groups"].as_array().unwrap() {
            for c in g["candidates"].as_array().unwrap() {
                let selected = g["maximum"] == c["unit"];
                from_json.push((
                    g["group"].as_u64().unwrap(),
                    c["unit"].as_u64().unwrap(),
                    c["cross_zeros"].as_u64().unwrap(),
                    c["count"].as_u64().unwrap(),
                    selected,
                ));
                let line = format!(
                    "candidate {:>6}  cross-group zeros {:>6}  M = {}",
                    c["unit"].as_u64().unwrap(),
                    c["cross_zeros"].as_u64().unwrap(),
                    c["count"].as_u64().unwrap()
                );
                assert!(text.contains(&line), "missing {line:?} in\n{text}");
            }
        }
        let from_csv: Vec<(u64, u64, u64, u64, bool)> = csv
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (
                    f[0].parse().unwrap(),
                    f[2].parse().unwrap(),
                    f[3].parse().unwrap(),
                    f[4].parse().unwrap(),
                    f[5] == "true",
                )
            })
            .collect();
        assert_eq!(from_json, from_csv, "{fixture}");
    }
}

#[test]
fn all_ones_not_found_exit_code() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("ones.csv"), "1,1,1,1\n1,1,1,1\n1,1,1,1\n1,1,1,1\n").unwrap();
    fs::write(dir.path().join("ones_groups.csv"), "1,1\n2,1\n3,2\n4,2\n").unwrap();
    let out = run(dir.path(), "ones", "5", "text");
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert_eq!(text.matches("not found").count(), 2, "{text}");
}

#[test]
fn input_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("asym.csv"), "1,0\n1,1\n").unwrap();
    fs::write(d.join("asym_groups.csv"), "1,1\n2,2\n").unwrap();
    let out = run(d, "asym", "2", "text");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not symmetric"), "{}", stderr(&out));

    fs::write(d.join("bad.csv"), "1,0\n0,oops\n").unwrap();
    fs::write(d.join("bad_groups.csv"), "1,1\n2,2\n").unwrap();
    let out = run(d, "bad", "2", "text");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    fs::write(d.join("mismatch.csv"), "1,0,0\n0,1,0\n0,0,1\n").unwrap();
    fs::write(d.join("mismatch_groups.csv"), "1,1\n2,2\n").unwrap();
    let out = run(d, "mismatch", "2", "text");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("3 units but grouping has 2"), "{}", stderr(&out));

    let out = mus(&["run", "--matrix", "nope.csv", "--groups", "nope.csv"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(d, "asym", "0", "text");
    assert_eq!(out.status.code(), Some(1), "m_bar 0 is a usage error");
}

#[test]
fn sparse_triplet_input() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // Tennis matrix as upper-triangle triplets of its nonzeros.
    let m = fixtures::tennis_matrix();
    let mut body = String::from("# tennis\n");
    for i in 0..8 {
        for j in i..8 {
            if m.get(i, j) != 0.0 {
                body += &format!("{} {} {}\n", i + 1, j + 1, m.get(i, j));
            }
        }
    }
    fs::write(d.join("t.txt"), body).unwrap();
    fs::write(d.join("g.csv"), fixtures::TENNIS.groups_csv).unwrap();
    let out = mus(&[
        "run", "--matrix", &path(d, "t.txt"), "--groups", &path(d, "g.csv"), "--m-bar", "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("maxima: 6, 8"));
}

#[test]
fn epsilon_flag_binarizes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("p.csv"), "1,0.001,0.9\n0.001,1,0.4\n0.9,0.4,1\n").unwrap();
    fs::write(d.join("g.csv"), "1,1\n2,2\n3,2\n").unwrap();
    let base = ["run", "--matrix", &path(d, "p.csv"), "--groups", &path(d, "g.csv")];
    assert_eq!(mus(&base).status.code(), Some(2));
    let mut loose = base.to_vec();
    loose.extend(["--epsilon", "0.01"]);
    let out = mus(&loose);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("maxima: 1, 2"), "{}", stdout(&out));
    let mut negative = base.to_vec();
    negative.extend(["--epsilon", "-1"]);
    assert_eq!(mus(&negative).status.code(), Some(1));
}

#[test]
fn oracle_command() {
    let dir = fixture_dir();
    let d = dir.path();
    let oracle = |fixture: &str| {
        mus(&[
            "oracle",
            "--matrix",
            &path(d, &format!("{fixture}.csv")),
            "--groups",
            &path(d, &format!("{fixture}_groups.csv")),
            "--format",
            "json",
        ])
    };
    let out = oracle("tennis");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["groups"][0]["argmax"], serde_json::json!([6, 7]));
    assert_eq!(v["groups"][1]["argmax"], serde_json::json!([8]));
    assert_eq!(v["agreement"], true);

    let out = oracle("fig1");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["groups"][0]["argmax"], serde_json::json!([2, 3]));
    assert_eq!(v["groups"][0]["max_count"], 3);
    assert_eq!(v["units"][5]["count"], 6);
}

#[test]
fn oracle_refuses_large_instances() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // 1000 units, no zeros given: an empty triplet body with an explicit diagonal entry.
    fs::write(d.join("big.txt"), "1000 1000 1\n").unwrap();
    let groups: String = (1..=1000).map(|u| format!("{u},{}\n", (u - 1) % 4 + 1)).collect();
    fs::write(d.join("big_groups.csv"), groups).unwrap();
    let out = mus(&[
        "oracle", "--matrix", &path(d, "big.txt"), "--groups", &path(d, "big_groups.csv"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("too large"), "{}", stderr(&out));
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("grid.toml");
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn simulate_writes_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "n_values = [100]\nk_values = [2, 3, 4]\nm_bar_values = [1, 5]\np_values = [0.8]\nseed = 42\n",
    );
    let out_dir = dir.path().join("out");
    let out = mus(&[
        "simulate", "--config", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
    let md = fs::read_to_string(out_dir.join("report.md")).unwrap();
    assert_eq!(md, stdout(&out));
    assert!(md.contains("| N | m_bar | K=2 | K=3 | K=4 |"));
}

#[test]
fn simulate_config_errors() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("n_values = []\nk_values = [2]\nm_bar_values = [1]\np_values = [0.8]\n", "n_values is empty"),
        ("n_values = [10]\nk_values = [2]\nm_bar_values = [1]\np_values = [1.2]\n", "p outside (0,1)"),
        ("n_values = [10]\nk_values = [2]\nm_bar_values = [0]\np_values = [0.5]\n", "m_bar"),
    ];
    for (body, message) in cases {
        let cfg = write_config(dir.path(), body);
        let out = mus(&["simulate", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1));
        assert!(stderr(&out).contains(message), "{}", stderr(&out));
    }
}

#[test]
fn fixture_csv_round_trip_preserves_zero_pattern() {
    for f in fixtures::ALL {
        let m = f.matrix();
        let mut buf = Vec::new();
        write_dense_csv(&m, &mut buf).unwrap();
        let back = parse_dense_csv(std::str::from_utf8(&buf).unwrap(), f.name).unwrap();
        assert_eq!(
            ZeroPattern::build(&m, Tolerance::EXACT),
            ZeroPattern::build(&back, Tolerance::EXACT)
        );
    }
}

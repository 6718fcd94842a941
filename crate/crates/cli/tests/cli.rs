use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use transversal_core::format::{collection_from_json, witness_from_json};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transversal")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn hab_with_odd_b_exits_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(dir.path(), &["gen", "hab", "--n", "6", "--a", "5", "--b", "1", "-o", "x.json"])), 0);
    let out = run(dir.path(), &["solve", "hc", "x.json"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let out = run(dir.path(), &["solve", "hc", "x.json", "--no-precheck", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["claim"]["status"], "not_found");
    let backing = v["claim"]["backing"].as_array().unwrap();
    assert!(backing.iter().any(|b| b == "solver_exhausted"));
    assert!(backing.iter().any(|b| b == "parity_certificate"));
}

#[test]
fn complete_collection_gives_witness_on_stdout() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "complete", "--n", "7", "-o", "k.json"]);
    let out = run(dir.path(), &["solve", "hc", "k.json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let witness = witness_from_json(text.lines().nth(1).expect("witness line")).unwrap();
    let g = collection_from_json(&fs::read_to_string(dir.path().join("k.json")).unwrap()).unwrap();
    witness.validate(&g).unwrap();

    assert_eq!(code(&run(dir.path(), &["solve", "hp", "k.json", "-o", "w.json"])), 2, "n colours for a path");
    assert_eq!(code(&run(dir.path(), &["solve", "hc", "k.json", "-o", "w.json"])), 0);
    assert_eq!(code(&run(dir.path(), &["verify", "witness", "k.json", "w.json"])), 0);
}

#[test]
fn tampered_witness_fails_revalidation() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "complete", "--n", "6", "-o", "k.json"]);
    run(dir.path(), &["solve", "hc", "k.json", "-o", "w.json"]);
    let text = fs::read_to_string(dir.path().join("w.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = v["edges"][0][2].clone();
    v["edges"][1][2] = first;
    fs::write(dir.path().join("bad.json"), v.to_string()).unwrap();
    let out = run(dir.path(), &["verify", "witness", "k.json", "bad.json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("more than once"), "{}", stdout(&out));
}

#[test]
fn corrupted_certificate_names_invariant() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "hab", "--n", "8", "--a", "5", "--b", "3", "-o", "x.json"]);
    assert_eq!(code(&run(dir.path(), &["cert", "find", "x.json", "--kind", "parity", "-o", "c.json"])), 0);
    assert_eq!(code(&run(dir.path(), &["cert", "check", "x.json", "c.json"])), 0);
    let good: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();

    let mut flipped = good.clone();
    flipped["type_of"][0] = "type2".into();
    let mut miscounted = good.clone();
    miscounted["crossing_count"] = 4.into();
    let mut overlap = good.clone();
    overlap["partition"]["b"].as_array_mut().unwrap().push(0.into());
    for (name, cert, needle) in [
        ("flip.json", flipped, "other kind"),
        ("count.json", miscounted, "crossing_count"),
        ("overlap.json", overlap, "partition"),
    ] {
        fs::write(dir.path().join(name), cert.to_string()).unwrap();
        let out = run(dir.path(), &["cert", "check", "x.json", name]);
        assert_eq!(code(&out), 1, "{name}");
        assert!(stdout(&out).contains(needle), "{name}: {}", stdout(&out));
    }
}

#[test]
fn independent_set_certificate_for_half_split() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "half-split", "--n", "7", "-o", "h.json"]);
    let out = run(dir.path(), &["cert", "find", "h.json", "--kind", "independent-set"]);
    assert_eq!(code(&out), 0);
    fs::write(dir.path().join("c.json"), stdout(&out)).unwrap();
    assert_eq!(code(&run(dir.path(), &["cert", "check", "h.json", "c.json"])), 0);
    assert_eq!(code(&run(dir.path(), &["solve", "hc", "h.json"])), 1);
}

#[test]
fn malformed_inputs_exit_two_with_location() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("syntax.json"), "{\"version\": 1,\n\"n\": 3,\n\"graphs\": [[[0, 1]] \n").unwrap();
    let out = run(dir.path(), &["solve", "hc", "syntax.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));

    fs::write(dir.path().join("range.json"), r#"{"version":1,"n":3,"graphs":[[[0,1]],[[1,7]],[[0,2]]]}"#).unwrap();
    let out = run(dir.path(), &["solve", "hc", "range.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("graphs[1]"), "{}", stderr(&out));

    fs::write(dir.path().join("field.json"), r#"{"version":1,"n":3,"graph":[]}"#).unwrap();
    let out = run(dir.path(), &["solve", "hc", "field.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("graph"), "{}", stderr(&out));

    fs::write(dir.path().join("version.json"), r#"{"version":9,"n":1,"graphs":[[]]}"#).unwrap();
    assert_eq!(code(&run(dir.path(), &["solve", "hc", "version.json"])), 2);

    assert_eq!(code(&run(dir.path(), &["solve", "hc", "missing.json"])), 2);
    assert_eq!(code(&run(dir.path(), &["solve", "hc"])), 2);
    assert_eq!(code(&run(dir.path(), &["--no-such-flag", "gen"])), 2);
    assert_eq!(code(&run(dir.path(), &["analyze", "stability", "field.json", "--eps", "abc"])), 2);
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "complete", "--n", "12", "-o", "k.json"]);
    let out = run(dir.path(), &["solve", "hc", "k.json", "--node-limit", "1", "--no-precheck"]);
    assert_eq!(code(&out), 3, "{}", stdout(&out));
    assert!(stdout(&out).contains("indeterminate"));
}

#[test]
fn gen_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 8] = [
        &["gen", "hab", "--n", "9", "--a", "4", "--b", "5"],
        &["gen", "half-split", "--n", "9", "--b-internal", "complete"],
        &["gen", "two-cliques", "--n", "8"],
        &["gen", "bipartite", "--n", "8"],
        &["gen", "random", "--n", "9", "--p", "0.4", "--seed", "3"],
        &["gen", "dirac", "--n", "10", "--seed", "4"],
        &["gen", "weak-mixture", "--n", "10"],
        &["gen", "complete", "--n", "5"],
    ];
    for args in cases {
        let out = run(dir.path(), args);
        assert_eq!(code(&out), 0, "{args:?}");
        let text = stdout(&out);
        let g = collection_from_json(text.trim()).unwrap();
        assert_eq!(transversal_core::format::collection_to_json(&g), text.trim(), "{args:?}");
    }
    let a = stdout(&run(dir.path(), &["gen", "dirac", "--n", "10", "--seed", "4"]));
    let b = stdout(&run(dir.path(), &["gen", "dirac", "--n", "10", "--seed", "4"]));
    assert_eq!(a, b);
    fs::write(dir.path().join("k.json"), stdout(&run(dir.path(), &["gen", "complete", "--n", "6"]))).unwrap();
    let out = run(dir.path(), &["gen", "perturb", "k.json", "--edits", "3"]);
    assert_eq!(code(&out), 0);
    collection_from_json(stdout(&out).trim()).unwrap();
}

#[test]
fn analysis_commands() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "hab", "--n", "10", "--a", "0", "--b", "10", "-o", "b.json"]);
    let out = run(dir.path(), &["analyze", "color", "b.json", "--color", "0", "--eps", "1/5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["extremality"]["nice"], false);
    assert_eq!(v["extraction"]["partition"]["kind"], "ec2");

    let out = run(dir.path(), &["analyze", "stability", "b.json", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "not_stable");

    let out = run(dir.path(), &["dist", "h", "b.json"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("distance 0 (exact)"), "{}", stdout(&out));
    let out = run(dir.path(), &["dist", "half-split", "b.json", "--local-search", "5"]);
    assert_eq!(code(&out), 0);

    let out = run(dir.path(), &["analyze", "collection-nice", "b.json", "--mu", "1/100"]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
}

#[test]
fn absorption_commands() {
    let dir = TempDir::new().unwrap();
    run(dir.path(), &["gen", "complete", "--n", "8", "-o", "k.json"]);
    let out = run(dir.path(), &["absorb", "enumerate", "k.json", "--color", "0", "--v", "0", "--u", "0", "--count"]);
    assert_eq!(code(&out), 0);
    // v1 v2 v3 v4 from the 7 other vertices, path colours from the 7 besides c
    assert_eq!(stdout(&out).trim(), (7 * 6 * 5 * 4 * 7 * 6 * 5).to_string());
    let out = run(dir.path(), &["absorb", "enumerate", "k.json", "--color", "0", "--v", "0", "--u", "1", "--limit", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 3);

    run(dir.path(), &["solve", "hc", "k.json", "-o", "c.json"]);
    let out = run(dir.path(), &["absorb", "check", "k.json", "c.json", "--delta-p", "1", "--eps", "1/20", "--gamma-p", "1/8"]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
}

#[test]
fn sweep_report_is_written_and_stable() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["verify", "sweep", "--n-max", "6", "--report-dir", "reports"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let first = fs::read_to_string(dir.path().join("reports/extremal_sweep.json")).unwrap();
    run(dir.path(), &["verify", "sweep", "--n-max", "6", "--report-dir", "reports"]);
    assert_eq!(first, fs::read_to_string(dir.path().join("reports/extremal_sweep.json")).unwrap());
    assert!(stdout(&out).contains("disagreements: 0"));
}

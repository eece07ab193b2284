use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const E1: &str = "#n=6 m=3\nA\t0\nA\t1\nA\t2\nB\t2\nB\t3\nB\t4\nC\t4\nC\t5\n";

fn sdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdc"))
        .args(args)
        .output()
        .expect("spawn sdc")
}

fn ok(args: &[&str]) -> String {
    let out = sdc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_owned()
}

#[test]
fn gen_then_build_sparse_respects_budget() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "d.tsv");
    let sk = path(dir.path(), "d.sdcs");
    ok(&[
        "gen",
        "d-dist",
        "--n",
        "16",
        "--m",
        "4",
        "--epsilon",
        "0.5",
        "--k",
        "1",
        "--seed",
        "7",
        "--out",
        &edges,
    ]);
    let report = ok(&[
        "build",
        "--oracle",
        "sparse",
        "--input",
        &edges,
        "--epsilon",
        "0.5",
        "--k",
        "1",
        "--seed",
        "7",
        "--out",
        &sk,
    ]);
    let edges: usize = field(&report, "edge_count").parse().unwrap();
    assert!(edges <= 32, "{report}");
    assert_eq!(field(&report, "edge_budget"), "32");
    assert_eq!(ok(&["stats", "--sketch", &sk]), report);
}

#[test]
fn query_prints_external_ids() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "e1.tsv");
    let sk = path(dir.path(), "e1.sdcs");
    let qs = path(dir.path(), "q.txt");
    fs::write(&edges, E1).unwrap();
    fs::write(&qs, "2 3 5\n\n0 1 2 3 4 5\n").unwrap();
    ok(&[
        "build", "--oracle", "simple", "--input", &edges, "--out", &sk,
    ]);
    let out = ok(&["query", "--sketch", &sk, "--queries", &qs, "--k", "1"]);
    assert_eq!(out, "A 1\n(none) 0\nA 3\n");
    let out = ok(&["query", "--sketch", &sk, "--queries", &qs, "--k", "3"]);
    assert_eq!(out, "A B C 3\n(none) 0\nA B C 6\n");
}

#[test]
fn eval_simple_exact_ratio_two() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "e1.tsv");
    let qs = path(dir.path(), "q.txt");
    fs::write(&edges, E1).unwrap();
    fs::write(&qs, "2 3 5\n").unwrap();
    let out = ok(&[
        "eval",
        "--input",
        &edges,
        "--oracle",
        "simple",
        "--queries",
        &qs,
        "--reference",
        "exact",
        "--k",
        "1",
    ]);
    assert_eq!(field(&out, "mean_ratio"), "2.000000");
    assert_eq!(field(&out, "reference"), "exact");
    let rec = ok(&[
        "eval",
        "--input",
        &edges,
        "--oracle",
        "simple",
        "--queries",
        &qs,
        "--k",
        "1",
        "--format",
        "records",
    ]);
    assert_eq!(rec.lines().count(), 2);
    assert!(
        rec.lines()
            .nth(1)
            .unwrap()
            .starts_with("0\t2\t1.000000\t2.000000"),
        "{rec}"
    );
}

#[test]
fn eval_candidates_over_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "d.tsv");
    ok(&[
        "gen",
        "d-dist",
        "--n",
        "60",
        "--m",
        "9",
        "--epsilon",
        "0.25",
        "--seed",
        "3",
        "--out",
        &edges,
    ]);
    let args = [
        "eval",
        "--input",
        &edges,
        "--oracle",
        "combined",
        "--queries",
        "candidates:20",
        "--reference",
        "greedy",
        "--seeds",
        "1..5",
        "--epsilon",
        "0.5",
    ];
    let a = ok(&args);
    assert_eq!(field(&a, "seeds"), "5");
    assert_eq!(field(&a, "queries"), "20");
    assert_eq!(field(&a, "reference"), "greedy-full");
    assert_eq!(a, ok(&args));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "r.tsv");
    ok(&[
        "gen",
        "random",
        "--n",
        "200",
        "--m",
        "30",
        "--density",
        "0.1",
        "--seed",
        "5",
        "--out",
        &edges,
    ]);
    let again = ok(&[
        "gen",
        "random",
        "--n",
        "200",
        "--m",
        "30",
        "--density",
        "0.1",
        "--seed",
        "5",
    ]);
    assert_eq!(fs::read_to_string(&edges).unwrap(), again);
    for oracle in ["simple", "greedy-partition", "sparse", "combined"] {
        let (a, b) = (path(dir.path(), "a.sdcs"), path(dir.path(), "b.sdcs"));
        let base = [
            "build",
            "--oracle",
            oracle,
            "--input",
            &edges,
            "--epsilon",
            "0.5",
            "--k",
            "2",
            "--seed",
            "9",
        ];
        let sa = ok(&[&base[..], &["--out", &a]].concat());
        let sb = ok(&[&base[..], &["--out", &b]].concat());
        assert_eq!(sa, sb);
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{oracle}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sdc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sdc(&["build", "--bogus"]).status.code(), Some(2));
    assert_eq!(sdc(&[]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let edges = path(dir.path(), "bad.tsv");
    fs::write(&edges, "a b c\n").unwrap();
    let out = sdc(&[
        "build",
        "--oracle",
        "simple",
        "--input",
        &edges,
        "--out",
        &path(dir.path(), "x.sdcs"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    fs::write(&edges, E1).unwrap();
    let out = sdc(&[
        "build",
        "--oracle",
        "sparse",
        "--input",
        &edges,
        "--epsilon",
        "0.7",
        "--out",
        &path(dir.path(), "x.sdcs"),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let junk = path(dir.path(), "junk.sdcs");
    fs::write(&junk, b"NOTASKETCH").unwrap();
    let out = sdc(&["stats", "--sketch", &junk]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SDCSKCH1"));
}

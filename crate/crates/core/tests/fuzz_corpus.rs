//! Replays the checked-in fuzz seeds through each decoder entry point.

use std::fs;
use std::path::PathBuf;

use sdc::persist::{decode_sketch, encode_sketch};
use sdc::setsystem::{parse_edge_list, parse_queries, write_edge_list};
use sdc::{Labels, OracleKind, Query};

fn corpus(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let bytes = fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

const E1: &str = "A\t0\nA\t1\nA\t2\nB\t2\nB\t3\nB\t4\nC\t4\nC\t5\n";

/// Valid sketch seeds: every kind, with and without names.
fn sketch_seeds() -> Vec<(String, Vec<u8>)> {
    let mut sys = parse_edge_list(E1).unwrap();
    let labels: Option<Labels> = sys.take_labels();
    let mut out = Vec::new();
    for kind in [
        OracleKind::Full,
        OracleKind::Simple,
        OracleKind::GreedyPartition,
        OracleKind::Sparse,
        OracleKind::Combined,
    ] {
        let sk = kind.build(&sys, 0.5, 1, 7).unwrap();
        out.push((format!("e1_{kind}.sdcs"), encode_sketch(&sk, None)));
        out.push((
            format!("e1_{kind}_named.sdcs"),
            encode_sketch(&sk, labels.as_ref()),
        ));
    }
    out
}

#[test]
fn sketch_seeds_are_current() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/sketch_decode");
    let regen = std::env::var_os("SDC_REGEN_CORPUS").is_some();
    for (name, bytes) in sketch_seeds() {
        let path = dir.join(&name);
        if regen {
            fs::write(&path, &bytes).unwrap();
        }
        assert_eq!(
            fs::read(&path).unwrap(),
            bytes,
            "{name} is stale; rerun with SDC_REGEN_CORPUS=1"
        );
    }
}

#[test]
fn sketch_corpus_replays() {
    for (path, bytes) in corpus("sketch_decode") {
        if let Ok(file) = decode_sketch(&bytes) {
            assert_eq!(
                encode_sketch(&file.sketch, file.labels.as_ref()),
                bytes,
                "{}",
                path.display()
            );
        }
    }
}

#[test]
fn edge_list_corpus_replays() {
    let mut parsed = 0;
    for (path, bytes) in corpus("edge_list") {
        let Ok(text) = String::from_utf8(bytes) else {
            continue;
        };
        if let Ok(sys) = parse_edge_list(&text) {
            let again = parse_edge_list(&write_edge_list(&sys)).unwrap();
            assert_eq!(again, sys, "{}", path.display());
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn query_corpus_replays() {
    let sys = parse_edge_list(E1).unwrap();
    for (_, bytes) in corpus("queries") {
        if let Ok(qs) = parse_queries(&bytes[..], sys.n(), sys.labels()) {
            assert!(qs.iter().all(|q| q.check(sys.n()).is_ok()
                && *q == Query::new(sys.n(), q.items().to_vec()).unwrap()));
        }
    }
}

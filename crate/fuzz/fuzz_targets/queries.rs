#![no_main]
use libfuzzer_sys::fuzz_target;
use sdc::setsystem::{parse_edge_list, parse_queries};

const E1: &str = "A\t0\nA\t1\nA\t2\nB\t2\nB\t3\nB\t4\nC\t4\nC\t5\n";

fuzz_target!(|data: &[u8]| {
    let sys = parse_edge_list(E1).unwrap();
    if let Ok(qs) = parse_queries(data, sys.n(), sys.labels()) {
        for q in qs {
            assert!(q.items().windows(2).all(|w| w[0] < w[1]));
            assert!(q.items().iter().all(|&i| (i as usize) < sys.n()));
        }
    }
    let _ = parse_queries(data, 64, None);
});

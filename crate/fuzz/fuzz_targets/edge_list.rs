#![no_main]
use libfuzzer_sys::fuzz_target;
use sdc::setsystem::{parse_edge_list, write_edge_list};

fuzz_target!(|data: &str| {
    // Header dimensions are allocated up front; keep them small so the
    // fuzzer explores parsing rather than memory limits.
    let huge = data
        .lines()
        .filter(|l| l.starts_with('#'))
        .flat_map(|l| l.split(|c: char| !c.is_ascii_digit()))
        .any(|t| t.len() > 6);
    if huge {
        return;
    }
    let Ok(sys) = parse_edge_list(data) else { return };
    if sys.n() > 1 << 20 || sys.m() > 1 << 20 {
        return;
    }
    let again = parse_edge_list(&write_edge_list(&sys)).expect("re-emitted edge list must parse");
    assert_eq!(again.n(), sys.n());
    assert_eq!(again.m(), sys.m());
    assert_eq!(again.edge_count(), sys.edge_count());
});

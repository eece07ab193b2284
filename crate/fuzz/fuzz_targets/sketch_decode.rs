#![no_main]
use libfuzzer_sys::fuzz_target;
use sdc::persist::{decode_sketch_with_limits, encode_sketch, Limits};
use sdc::{Oracle, Query};

fuzz_target!(|data: &[u8]| {
    let Ok(file) = decode_sketch_with_limits(data, Limits { max_n: 1 << 16 }) else { return };
    // Accepted streams are canonical.
    assert_eq!(encode_sketch(&file.sketch, file.labels.as_ref()), data);
    let sk = &file.sketch;
    let q = Query::full(sk.n());
    let sol = sk.answer(&q, 2).expect("decoded sketches answer queries");
    assert!(sol.set_ids.len() <= 2);
});

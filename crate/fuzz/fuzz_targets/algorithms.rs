#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::tbf::{parse_algorithms, write_algorithms};

fuzz_target!(|data: &str| {
    if let Ok(algs) = parse_algorithms(data) {
        assert_eq!(parse_algorithms(&write_algorithms(&algs)).expect("written algorithms parse"), algs);
    }
});

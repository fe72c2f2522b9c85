#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::profiles::{parse_inducing_sets, write_inducing_sets};

fuzz_target!(|data: &str| {
    if let Ok(sets) = parse_inducing_sets(data) {
        assert_eq!(parse_inducing_sets(&write_inducing_sets(&sets)).expect("written sets parse"), sets);
    }
});

#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::profiles::{parse_profiles, write_profiles};

fuzz_target!(|data: &str| {
    if let Ok(ps) = parse_profiles(data) {
        assert_eq!(parse_profiles(&write_profiles(&ps)).expect("written profiles parse"), ps);
    }
});

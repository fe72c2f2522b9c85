#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::tanner::{load_alist, write_alist};

fuzz_target!(|data: &str| {
    if let Ok(g) = load_alist(data) {
        assert_eq!(load_alist(&write_alist(&g)).expect("written alist parses"), g);
    }
});

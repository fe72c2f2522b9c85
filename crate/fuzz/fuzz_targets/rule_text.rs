#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::tbf::{validate_rule, FlipRule};

fuzz_target!(|data: &str| {
    if let Ok(r) = FlipRule::from_text(data) {
        let _ = validate_rule(&r);
        assert_eq!(FlipRule::from_text(&r.to_text()).expect("written rules parse"), r);
    }
});

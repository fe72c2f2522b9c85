#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::tbf::{parse_constraints, RuleFamily};

fuzz_target!(|data: &str| {
    if let Ok(cs) = parse_constraints(data) {
        if let Ok(fam) = RuleFamily::new(3, &cs) {
            let id = fam.size() - 1;
            let rule = fam.rule_from_id(id).expect("last id is in range");
            assert_eq!(fam.rule_to_id(&rule), Some(id));
        }
    }
});

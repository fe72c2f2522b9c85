#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::tanner::{parse_graphs, write_graph};

fuzz_target!(|data: &str| {
    if let Ok(gs) = parse_graphs(data) {
        for g in gs {
            let again = parse_graphs(&write_graph(&g)).expect("written graphs parse");
            assert_eq!(again, vec![g]);
        }
    }
});

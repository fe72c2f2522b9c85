#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab::tanner::load_qc;

fuzz_target!(|data: &str| {
    // Keep expansion sizes sane; the header is the first line.
    if data.len() < 4096 {
        if let Ok(qc) = load_qc(data) {
            let n = qc.graph.num_variables();
            assert_eq!(n % qc.circulant.max(1), 0);
        }
    }
});

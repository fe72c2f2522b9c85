#![no_main]
use libfuzzer_sys::fuzz_target;
use tbflab_cli::config::{config_args, parse_config};

fuzz_target!(|data: &str| {
    if let Ok(entries) = parse_config(data) {
        let args = config_args(&entries);
        for (k, v) in &entries {
            let flag = format!("--{k}");
            assert_eq!(args.contains(&flag), v != "false", "{k}={v}");
        }
    }
});

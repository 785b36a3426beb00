#![no_main]

use libfuzzer_sys::fuzz_target;
use mmqss_cli::config::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = ExperimentConfig::from_json(text) {
        config.validate().expect("accepted configs are valid");
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use mmqss::Parameters;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = Parameters::from_json(text) {
        p.validate().expect("accepted parameters are valid");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(Parameters::from_json(&json).unwrap(), p);
        // derived quantities never panic on accepted input
        let _ = mmqss::model::derive(&p);
        let _ = mmqss::model::classify_regime(&p, &mmqss::Thresholds::default());
        let _ = mmqss::lna::LnaResult::evaluate(&p);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use mmqss::deterministic::VectorFieldKind;
use mmqss::fenichel::Tfpv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(kind) = text.parse::<VectorFieldKind>() {
        assert_eq!(kind.as_str().parse::<VectorFieldKind>().unwrap(), kind);
    }
    if let Ok(tfpv) = text.parse::<Tfpv>() {
        assert_eq!(tfpv.as_str(), text);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use zlab_core::complex::{format_complex, parse_complex};
use zlab_core::zeta::HurwitzParameter;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse_complex(text) {
        // Whatever parses must survive a format/parse round trip.
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
    let _ = HurwitzParameter::parse(text);
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use zlab_core::lab::RawConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(raw) = RawConfig::parse(text) {
        let again = RawConfig::parse(&raw.canonical()).expect("canonical form parses");
        assert_eq!(raw.digest(), again.digest());
    }
});

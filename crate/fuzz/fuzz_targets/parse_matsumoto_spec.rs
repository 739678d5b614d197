#![no_main]

use libfuzzer_sys::fuzz_target;
use zlab_core::matsumoto::MatsumotoSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = MatsumotoSpec::from_toml_str(text) {
        let again = MatsumotoSpec::from_toml_str(&spec.to_toml_string()).expect("canonical form parses");
        assert_eq!(spec, again);
    }
});

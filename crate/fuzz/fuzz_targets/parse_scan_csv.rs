#![no_main]

use libfuzzer_sys::fuzz_target;
use zlab_core::lab::{joint_scan_csv, read_joint_scan_csv, read_scan_csv, scan_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = read_scan_csv(text) {
        assert_eq!(read_scan_csv(&scan_csv(&records)).unwrap(), records);
    }
    if let Ok((labels, records)) = read_joint_scan_csv(text) {
        assert_eq!(read_joint_scan_csv(&joint_scan_csv(&labels, &records)).unwrap(), (labels, records));
    }
});

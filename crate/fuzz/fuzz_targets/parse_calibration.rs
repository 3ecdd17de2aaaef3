#![no_main]

use libfuzzer_sys::fuzz_target;
use redprod::{build_root_system, Calibration};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cal) = Calibration::from_json_str(text) else {
        return;
    };
    let rs = build_root_system('A', 1).unwrap();
    let _ = cal.constant(&rs, 5);
});

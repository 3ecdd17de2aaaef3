#![no_main]

use libfuzzer_sys::fuzz_target;
use redprod::parse_rat;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rat(text) {
        // canonical form round-trips exactly
        let again = parse_rat(&r.to_string()).expect("display form must re-parse");
        assert_eq!(r, again);
    }
});

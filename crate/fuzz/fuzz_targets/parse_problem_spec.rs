#![no_main]

use libfuzzer_sys::fuzz_target;
use redprod::problem::ProblemSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = ProblemSpec::from_json_str(text) else {
        return;
    };
    let Ok((od, zeta, _cfg)) = spec.build() else {
        return;
    };
    // Deep paths stay bounded: |W|^N can explode, so only run the tuple
    // enumeration when it is small.
    let mut order: u128 = 1;
    for k in 2..=(od.rs.rank as u128 + 1) {
        order *= k;
    }
    if order.pow(od.n_orbits() as u32) <= 4096 {
        let report = redprod::check_generic(&od);
        if report.is_ok() {
            let _ = redprod::assemble_integrand(&od, &zeta);
        }
    }
});

#![no_main]

use codecirc::certify::certify;
use codecirc::netlist::Netlist;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(net) = Netlist::from_json(text) else {
        return;
    };
    // Keep exhaustive simulation cheap.
    if net.k <= 10 {
        let cert = certify(&net, 3);
        if cert.passed() {
            assert!(net.check_independence().unwrap());
        }
    }
    let back = Netlist::from_json(&net.to_json().unwrap()).unwrap();
    assert_eq!(back, net);
});

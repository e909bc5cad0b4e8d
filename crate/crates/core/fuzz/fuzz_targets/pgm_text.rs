#![no_main]

use codecirc::ParityGeneratorMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = text.parse::<ParityGeneratorMatrix>() {
        let back: ParityGeneratorMatrix = g.to_string().parse().unwrap();
        assert_eq!(back, g);
    }
});

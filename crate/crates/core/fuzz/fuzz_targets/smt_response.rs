#![no_main]

use codecirc::combtree::InputCombination;
use codecirc::smt::{functions_from_model, parse_response};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(resp) = parse_response(text) else {
        return;
    };
    let comb = InputCombination::new(3, vec![0b011, 0b101, 0b110]).unwrap();
    if let Ok(tables) = functions_from_model(&comb, &resp.definitions) {
        assert_eq!(tables.len(), 3);
        assert!(tables.iter().all(|t| t.arity() == 3));
    }
});

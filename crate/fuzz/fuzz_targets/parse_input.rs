#![no_main]

use libfuzzer_sys::fuzz_target;
use subshift::input::{emit, parse_input};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_input(text) {
        let again = parse_input(&emit(&spec)).expect("emitted text must parse");
        assert_eq!(again.substitution, spec.substitution);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use subshift::cli::analyze_text;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 256 {
        return;
    }
    if let Err(e) = analyze_text(text) {
        assert!((2..=5).contains(&e.exit_code()));
    }
});

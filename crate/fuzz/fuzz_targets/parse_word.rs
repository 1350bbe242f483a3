#![no_main]

use libfuzzer_sys::fuzz_target;
use subshift::{Alphabet, Word};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (letters, word) = text.split_once('\n').unwrap_or((text, ""));
    let Ok(alphabet) = Alphabet::new(letters.chars()) else { return };
    if let Ok(w) = Word::parse(word, &alphabet) {
        assert_eq!(w.to_string(), word);
    }
});

//! The sequence-file parser must never panic, and accepted sequences must
//! roundtrip through the writer.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(terms) = reesse2p::sequence::parse_sequence(text) {
        let written = reesse2p::sequence::write_sequence(&terms);
        let again = reesse2p::sequence::parse_sequence(&written)
            .expect("written sequence must reparse");
        assert_eq!(again, terms);
        // validation may accept or reject, but must not panic
        let _ = reesse2p::sequence::validate(&terms);
    }
});

//! The ciphertext-file parser must never panic, and accepted files must
//! roundtrip through the writer byte-exactly.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ct) = reesse2p::message::parse_ciphertext(text) {
        let written = reesse2p::message::write_ciphertext(&ct);
        let again = reesse2p::message::parse_ciphertext(&written)
            .expect("written ciphertext must reparse");
        assert_eq!(again, ct);
    }
});

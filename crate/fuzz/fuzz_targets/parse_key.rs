//! Key-file parsers must never panic on arbitrary input, and anything they
//! accept must survive a serialize/parse roundtrip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(key) = reesse2p::keyforge::parse_public(text) {
        let again = reesse2p::keyforge::parse_public(&reesse2p::keyforge::serialize_public(&key))
            .expect("serialized public key must reparse");
        assert_eq!(again.c, key.c);
    }
    if let Ok(key) = reesse2p::keyforge::parse_private(text) {
        let again = reesse2p::keyforge::parse_private(&reesse2p::keyforge::serialize_private(&key))
            .expect("serialized private key must reparse");
        assert_eq!(again.a.terms(), key.a.terms());
        assert_eq!(again.w_inv, key.w_inv);
    }
});

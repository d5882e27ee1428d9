#![no_main]

use libfuzzer_sys::fuzz_target;
use skc::{decode_entry, encode_entry, CacheKey};

fuzz_target!(|data: &[u8]| {
    let key = CacheKey::new("sk-lift", 10, 6, "Q");
    if let Some(p) = decode_entry(data, &key) {
        assert_eq!(decode_entry(encode_entry(&key, &p).as_bytes(), &key), Some(p));
    }
});

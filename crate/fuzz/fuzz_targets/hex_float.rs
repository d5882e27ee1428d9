#![no_main]

use libfuzzer_sys::fuzz_target;
use skc_core::lfun::{format_hex, parse_hex};

fuzz_target!(|data: &[u8]| {
    let Some((&b, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let bits = 2 + u32::from(b) * 4;
    if let Ok(x) = parse_hex(s, bits) {
        assert_eq!(parse_hex(&format_hex(&x), bits).unwrap(), x);
    }
});

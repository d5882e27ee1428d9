#![no_main]

use libfuzzer_sys::fuzz_target;
use skc::parse_siegel_lines;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_siegel_lines(s);
});

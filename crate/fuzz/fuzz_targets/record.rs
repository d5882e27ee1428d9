#![no_main]

use libfuzzer_sys::fuzz_target;
use skc_core::records::parse_record;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_record(s) {
        let text = r.to_json();
        let again = parse_record(&text).expect("emitted records parse");
        assert_eq!(again.to_json(), text);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use skc::JobManifest;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = JobManifest::parse(s) {
        assert_eq!(JobManifest::parse(&m.to_json()).unwrap(), m);
        if let Ok(r) = m.resolved() {
            assert_eq!(r.job().unwrap(), m.job().unwrap());
        }
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use loewner::linalg::ComplexMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = ComplexMatrix::from_json_str(text) {
        let back = ComplexMatrix::from_json_str(&m.to_json_string()).expect("re-encoded matrix parses");
        assert_eq!(back, m);
    }
});

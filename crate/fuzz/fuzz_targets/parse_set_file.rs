#![no_main]

use chg_core::setfile::{format_set, parse_set};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = parse_set(text) {
        let again = parse_set(&format_set(&set)).expect("formatted set must parse");
        assert_eq!(again, set);
    }
});

#![no_main]

use chg_core::setfile::parse_group;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(group) = parse_group(text) {
        assert_eq!(parse_group(&group.to_string()).unwrap(), group);
        let _ = group.identity();
    }
});

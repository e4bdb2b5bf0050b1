#![no_main]

use libfuzzer_sys::fuzz_target;

// The builtin-spec grammar parser must return an error, never panic, for
// arbitrary byte input (including non-UTF-8 and non-ASCII strings).
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(group) = cocycle::formats::parse_group_spec(text) {
            assert!(group.order() >= 1);
        }
    }
});

#![no_main]

use cocycle::group::Group;
use libfuzzer_sys::fuzz_target;
use std::sync::{Arc, OnceLock};

fn host_group() -> &'static Arc<Group> {
    static GROUP: OnceLock<Arc<Group>> = OnceLock::new();
    GROUP.get_or_init(|| Arc::new(Group::cyclic(4).unwrap()))
}

// The function-file parser must reject malformed input with an error, never
// a panic, and accepted values must survive a render/reparse round trip
// bit for bit.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let group = host_group();
        if let Ok(f) = cocycle::formats::parse_function_json(text, group) {
            let rendered = cocycle::formats::function_to_json(&f).render();
            let back = cocycle::formats::parse_function_json(&rendered, group)
                .expect("rendered output must reparse");
            assert_eq!(cocycle::formats::function_to_json(&back).render(), rendered);
        }
    }
});

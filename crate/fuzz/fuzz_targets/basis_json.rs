#![no_main]

use cocycle::group::Group;
use libfuzzer_sys::fuzz_target;
use std::sync::{Arc, OnceLock};

fn host_group() -> &'static Arc<Group> {
    static GROUP: OnceLock<Arc<Group>> = OnceLock::new();
    GROUP.get_or_init(|| Arc::new(Group::cyclic(4).unwrap()))
}

// The basis-file parser must reject malformed input with an error, never a
// panic.  Acceptance implies the matrices passed full representation
// validation (homomorphism, unitarity, completeness) for the host group.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = cocycle::formats::parse_basis_json(text, host_group());
    }
});

#![no_main]

use ent_evolve::network::{evaluate, rewrite_snake, NetworkFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(file) = serde_json::from_slice::<NetworkFile>(data) else { return };
    let legs: u64 = file.nodes.iter().flat_map(|n| &n.dims).fold(1u64, |acc, &d| acc.saturating_mul(d as u64));
    if legs > 1 << 16 {
        return;
    }
    let Ok(g) = file.into_graph() else { return };
    let (out, events) = rewrite_snake(&g);
    assert_eq!(out.signature(), g.signature());
    assert!(out.node_count() <= g.node_count());
    for e in &events {
        assert_eq!(e.before, e.after);
    }
    let before = evaluate(&g, None).expect("valid graphs evaluate");
    let after = evaluate(&out, None).expect("rewritten graphs evaluate");
    assert_eq!(before.dims(), after.dims());
});

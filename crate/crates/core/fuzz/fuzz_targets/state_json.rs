#![no_main]

use ent_evolve::entanglement::{g_concurrence_pure, g_concurrence_schmidt};
use ent_evolve::quantum::{map_from_state, state_from_map, StateFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(file) = serde_json::from_slice::<StateFile>(data) else { return };
    if file.dims.iter().any(|&d| d > 16) {
        return;
    }
    let Ok(psi) = file.into_state() else { return };
    let back = state_from_map(&map_from_state(&psi), false).expect("round trip");
    assert_eq!(back, psi);
    if let Ok(v) = g_concurrence_pure(&psi) {
        assert!(v.value.is_finite() && v.value >= 0.0 && v.value <= 1.0 + 1e-9);
        let s = g_concurrence_schmidt(&psi).expect("same domain");
        assert!((v.value - s).abs() <= 1e-9);
    }
});

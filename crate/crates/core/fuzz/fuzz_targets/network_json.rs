#![no_main]

use ent_evolve::network::{evaluate, plan_exhaustive, plan_greedy, NetworkFile};
use libfuzzer_sys::fuzz_target;

/// Product of every leg dimension bounds every intermediate tensor.
fn small(file: &NetworkFile) -> bool {
    let mut total: u64 = 1;
    for d in file.nodes.iter().flat_map(|n| &n.dims) {
        total = total.saturating_mul(*d as u64);
        if total > 1 << 16 {
            return false;
        }
    }
    true
}

fuzz_target!(|data: &[u8]| {
    let Ok(file) = serde_json::from_slice::<NetworkFile>(data) else { return };
    if !small(&file) {
        return;
    }
    let Ok(g) = file.into_graph() else { return };
    let round = NetworkFile::from_graph(&g).into_graph().expect("written networks reload");
    assert_eq!(round.signature(), g.signature());
    let greedy = plan_greedy(&g);
    let a = evaluate(&g, Some(&greedy)).expect("valid graphs evaluate");
    if let Ok(best) = plan_exhaustive(&g) {
        assert!(best.estimated_cost <= greedy.estimated_cost);
        let b = evaluate(&g, Some(&best)).expect("valid graphs evaluate");
        assert_eq!(a.dims(), b.dims());
    }
});

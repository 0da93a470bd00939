#![no_main]

use ent_evolve::quantum::{choi_state, ChannelFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(file) = serde_json::from_slice::<ChannelFile>(data) else { return };
    if file.dims.iter().any(|&d| d > 16) || file.kraus.len() > 32 {
        return;
    }
    let Ok(c) = file.into_channel() else { return };
    let back = ChannelFile::from_channel(&c).into_channel().expect("written channels reload");
    assert_eq!(back.operators(), c.operators());
    if let Ok(rho) = choi_state(&c) {
        let trace: f64 = (0..rho.matrix().nrows()).map(|i| rho.matrix()[(i, i)].re).sum();
        assert!(trace.is_finite());
    }
});

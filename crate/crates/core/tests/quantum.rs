use ent_evolve::entanglement::{
    concurrence2_pure, convex_roof_upper_bound, g_concurrence_pure, g_concurrence_raw, g_concurrence_schmidt,
    measure_operator, mixed_state_dual, wootters_concurrence, Exactness, Measure,
};
use ent_evolve::network::{apply_map_state_duality, evaluate};
use ent_evolve::quantum::{
    apply_channel, apply_channel_network, apply_one_sided, bell_state, choi_state, duality_evolution_identity,
    map_from_state, max_abs_diff, random_channel, random_channel_with, random_complex_matrix, random_density,
    random_pure_state, random_pure_state_with, schmidt, state_from_map, DensityOperator, Dims, KrausChannel, PureState,
    Side,
};
use ent_evolve::C64;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<C64> {
    random_complex_matrix(rng, d, d).qr().q()
}

/// `($ ⊗ 1)|Φ⁺⟩⟨Φ⁺|` entry by entry from the definition.
fn choi_oracle(ch: &KrausChannel) -> DMatrix<C64> {
    let d = ch.d_in();
    let mut out = DMatrix::zeros(d * d, d * d);
    for a in ch.operators() {
        for (i, j, k, l) in itertools(d) {
            // ⟨ij|(A⊗1)|Φ⁺⟩ = A_{i j} / √d
            out[(i * d + j, k * d + l)] += a[(i, j)] * a[(k, l)].conj() / d as f64;
        }
    }
    out
}

fn itertools(d: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..d).flat_map(move |i| (0..d).flat_map(move |j| (0..d).flat_map(move |k| (0..d).map(move |l| (i, j, k, l)))))
}

/// `2|a d − b c|` for `a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩`.
fn two_qubit_oracle(psi: &PureState) -> f64 {
    let v = psi.amplitudes();
    2.0 * (v[0] * v[3] - v[1] * v[2]).norm()
}

#[test]
fn bell_anchor_and_products() {
    for d in 2..=6 {
        assert!((g_concurrence_pure(&bell_state(d).unwrap()).unwrap().value - 1.0).abs() <= 1e-12);
        let mut r = ChaCha8Rng::seed_from_u64(d as u64);
        let a = random_pure_state_with(&mut r, d, 1).unwrap();
        let b = random_pure_state_with(&mut r, d, 1).unwrap();
        let prod: Vec<C64> = a.amplitudes().iter().flat_map(|x| b.amplitudes().iter().map(move |y| x * y)).collect();
        let prod = PureState::new((d, d), prod).unwrap();
        assert!(g_concurrence_pure(&prod).unwrap().value < 1e-12);
    }
}

#[test]
fn choi_matches_definition() {
    for d in 2..=4 {
        for k in 1..=3 {
            let ch = random_channel(d, k, (d * 10 + k) as u64).unwrap();
            let choi = choi_state(&ch).unwrap();
            assert!(max_abs_diff(choi.matrix(), &choi_oracle(&ch)) < 1e-14);
            assert!((choi.trace() - 1.0).abs() < 1e-12);
        }
    }
    let id = choi_state(&KrausChannel::identity(3).unwrap()).unwrap();
    assert!(max_abs_diff(id.matrix(), &bell_state(3).unwrap().projector()) < 1e-15);
}

#[test]
fn network_route_matches_matrix_route() {
    for seed in 0..10 {
        let ch = random_channel(3, 2, seed).unwrap();
        let rho = random_density(3, 2, seed + 100).unwrap();
        let direct = apply_channel(&ch, &rho).unwrap();
        let net = apply_channel_network(&ch, &rho).unwrap();
        assert!(max_abs_diff(direct.matrix(), &net) < 1e-13);
    }
}

#[test]
fn duality_identity_on_random_pairs() {
    for d in [2, 3] {
        for seed in 0..100 {
            let ch = random_channel(d, 1 + (seed as usize % 4), seed).unwrap();
            let psi = random_pure_state(d, d, seed + 1000).unwrap();
            let report = duality_evolution_identity(&ch, &psi, 1e-10).unwrap();
            assert!(report.pass, "d={d} seed={seed}: {}", report.max_residual);
        }
    }
}

#[test]
fn graphical_duality_reproduces_state() {
    for seed in 0..30 {
        let d = 2 + seed as usize % 5;
        let psi = random_pure_state(d, d, seed).unwrap();
        let g = psi.to_network(0).unwrap();
        let (h, _) = apply_map_state_duality(&g, 0, 1).unwrap();
        let t = evaluate(&h, None).unwrap();
        assert!(t.max_relative_diff(&psi.to_tensor()) <= 1e-12);
    }
}

#[test]
fn werner_states_have_known_concurrence() {
    // p |Φ⁻⟩⟨Φ⁻| + (1 − p) 1/4 has concurrence max(0, (3p − 1)/2).
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi_minus = PureState::new((2, 2), vec![c(s), c(0.0), c(0.0), c(-s)]).unwrap();
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let m = phi_minus.projector().scale(p) + DMatrix::identity(4, 4).scale((1.0 - p) / 4.0);
        let rho = DensityOperator::new(Dims::Bipartite(2, 2), m).unwrap();
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        let got = wootters_concurrence(&rho).unwrap().value;
        assert!((got - expected).abs() < 1e-10, "p={p}: {got} vs {expected}");
        let ub = convex_roof_upper_bound(&rho, Measure::Concurrence2, 300, 1).unwrap();
        assert!(ub.value >= got - 1e-12);
        if p < 1.0 && p > 0.0 {
            assert_eq!(ub.exactness, Exactness::UpperBound { budget: 300 });
        }
    }
}

#[test]
fn amplitude_damping_closed_form() {
    for seed in 0..10 {
        let psi = random_pure_state(2, 2, seed).unwrap();
        let s = schmidt(&psi);
        let base = 2.0 * (s.coefficients[0] * s.coefficients[1]).sqrt();
        for gamma in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let ch = KrausChannel::amplitude_damping(gamma);
            let evolved = apply_one_sided(&ch, &psi.density(), Side::A).unwrap();
            let lhs = wootters_concurrence(&evolved).unwrap().value;
            let choi = wootters_concurrence(&choi_state(&ch).unwrap()).unwrap().value;
            assert!((choi - (1.0f64 - gamma).sqrt()).abs() < 1e-8);
            assert!((lhs - (1.0f64 - gamma).sqrt() * base).abs() < 1e-8);
        }
    }
}

#[test]
fn mixed_dual_round_trip() {
    for d in [2, 3] {
        for seed in 0..100 {
            let rank = 1 + seed as usize % (d * d);
            let rho = random_density(d * d, rank, seed).unwrap().with_dims(Dims::Bipartite(d, d)).unwrap();
            let dual = mixed_state_dual(&rho).unwrap();
            let back = dual.apply(&bell_state(d).unwrap().projector(), Side::A).unwrap();
            assert!(max_abs_diff(&back, rho.matrix()) < 1e-10);
            let via_kraus =
                apply_channel(&dual.kraus().unwrap().one_sided(Side::A, d), &bell_state(d).unwrap().density()).unwrap();
            assert!(max_abs_diff(via_kraus.matrix(), rho.matrix()) < 1e-10);
        }
    }
}

#[test]
fn roof_is_exact_on_pure_and_bounds_wootters() {
    for seed in 0..20 {
        let psi = random_pure_state(2, 2, seed).unwrap();
        let v = convex_roof_upper_bound(&psi.density(), Measure::Concurrence2, 5, seed).unwrap();
        assert_eq!(v.exactness, Exactness::Exact);
        assert!((v.value - two_qubit_oracle(&psi)).abs() < 1e-12);
        let rho = random_density(4, 2 + seed as usize % 3, seed).unwrap().with_dims(Dims::Bipartite(2, 2)).unwrap();
        let exact = wootters_concurrence(&rho).unwrap().value;
        let small = convex_roof_upper_bound(&rho, Measure::Concurrence2, 1, seed).unwrap().value;
        let large = convex_roof_upper_bound(&rho, Measure::Concurrence2, 1000, seed).unwrap().value;
        assert!(large <= small);
        assert!(large >= exact - 1e-12);
    }
}

#[test]
fn mixed_qudits_only_have_bounds() {
    let rho = random_density(9, 3, 4).unwrap().with_dims(Dims::Bipartite(3, 3)).unwrap();
    assert!(measure_operator(Measure::GConcurrence, &rho).is_err());
    let v = convex_roof_upper_bound(&rho, Measure::GConcurrence, 10, 1).unwrap();
    assert_eq!(v.exactness, Exactness::UpperBound { budget: 10 });
    assert!(v.value >= 0.0);
}

fn state_strategy(max_d: usize) -> impl Strategy<Value = PureState> {
    (2..=max_d, any::<u64>()).prop_map(|(d, seed)| random_pure_state(d, d, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn map_state_round_trip_is_exact(da in 1usize..=6, db in 1usize..=6, seed in any::<u64>()) {
        let psi = random_pure_state(da, db, seed).unwrap();
        let back = state_from_map(&map_from_state(&psi), false).unwrap();
        prop_assert_eq!(back, psi);
    }

    #[test]
    fn schmidt_product_matches_determinant(psi in state_strategy(6)) {
        let det = g_concurrence_raw(&psi).unwrap();
        let prod = g_concurrence_schmidt(&psi).unwrap();
        prop_assert!((det - prod).abs() <= 1e-12, "{} vs {}", det, prod);
        let s = schmidt(&psi);
        prop_assert!((s.reconstruct() - psi.amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn wootters_agrees_on_pure_states(seed in any::<u64>()) {
        let psi = random_pure_state(2, 2, seed).unwrap();
        let w = wootters_concurrence(&psi.density()).unwrap().value;
        let p = concurrence2_pure(&psi).unwrap().value;
        prop_assert!((w - p).abs() <= 1e-10);
        prop_assert!((p - two_qubit_oracle(&psi)).abs() <= 1e-12);
    }

    #[test]
    fn invariant_under_local_unitaries(seed in any::<u64>(), d in 2usize..=5) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_pure_state_with(&mut r, d, d).unwrap();
        let u = random_unitary(&mut r, d).kronecker(&random_unitary(&mut r, d));
        let moved = PureState::from_vector((d, d), &u * psi.amplitudes()).unwrap();
        let before = g_concurrence_raw(&psi).unwrap();
        let after = g_concurrence_raw(&moved).unwrap();
        prop_assert!((before - after).abs() <= 1e-10);
    }

    #[test]
    fn vanishes_iff_schmidt_deficient(seed in any::<u64>(), d in 2usize..=5, drop in 0usize..=2) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let rank = d.saturating_sub(drop).max(1);
        let m = random_complex_matrix(&mut r, d, rank) * random_complex_matrix(&mut r, rank, d);
        let psi = state_from_map(&m, true).unwrap();
        let value = g_concurrence_raw(&psi).unwrap();
        let deficient = schmidt(&psi).rank(1e-8) < d;
        prop_assert_eq!(deficient, rank < d);
        if deficient {
            prop_assert!(value < 1e-12);
        } else {
            prop_assert!(value > 0.0);
        }
    }

    #[test]
    fn amplitude_scaling_is_degree_two(psi in state_strategy(5), r in 0.1f64..10.0) {
        let scaled = psi.scale(C64::new(r, 0.0));
        let lhs = g_concurrence_raw(&scaled).unwrap();
        let rhs = r * r * g_concurrence_raw(&psi).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        let op = measure_operator(Measure::GConcurrence, &psi.density().scale(r * r)).unwrap().value;
        prop_assert!((op - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn random_channels_are_trace_preserving(seed in any::<u64>(), d in 1usize..=5, k in 1usize..=4) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel_with(&mut r, d, k).unwrap();
        prop_assert!(ent_evolve::quantum::is_trace_preserving(&ch));
        let rho = DensityOperator::maximally_mixed(Dims::Single(d)).unwrap();
        prop_assert!((apply_channel(&ch, &rho).unwrap().trace() - 1.0).abs() < 1e-12);
    }
}

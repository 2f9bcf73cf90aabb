//! Property-based invariants. Each case draws a seed and dimensions; the
//! random objects are built from `stream_rng(seed, ·)` so failures shrink to
//! reproducible inputs.

use proptest::prelude::*;

use assisted_capacity::bounds::{entropy_triple, lower_bound_aggregate, upper_bound_cor6};
use assisted_capacity::channel::StinespringIsometry;
use assisted_capacity::detector::{detector_bound_small_delta, PovmElement};
use assisted_capacity::metrics::{entanglement_e, relative_entropy, von_neumann_entropy};
use assisted_capacity::optimize::{golden_section_min, project_to_simplex};
use assisted_capacity::rng::stream_rng;
use assisted_capacity::subspace::{prop7_dimension, SubspaceParams};
use assisted_capacity::tensor::{
    haar_isometry, haar_unitary, kron, partial_transpose, random_bipartite_pure, random_density,
    schmidt_decompose, trace_re, BipartiteShape, CMat, DensityOperator, PureStateVector, C64,
};

const TOL: f64 = 1e-9;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn schmidt_coefficients_are_local_unitary_invariant(seed in any::<u64>(), (b, c) in dims()) {
        let mut rng = stream_rng(seed, 0);
        let shape = BipartiteShape::new(b, c).unwrap();
        let psi = random_bipartite_pure(&mut rng, shape);
        let local = kron(&haar_unitary(&mut rng, b), &haar_unitary(&mut rng, c));
        let rotated = PureStateVector::bipartite(&local * psi.amplitudes(), shape).unwrap();
        let l1 = schmidt_decompose(&psi).unwrap().coefficients;
        let l2 = schmidt_decompose(&rotated).unwrap().coefficients;
        for (x, y) in l1.iter().zip(&l2) {
            prop_assert!((x - y).abs() < TOL);
        }
        prop_assert!((l1.iter().sum::<f64>() - 1.0).abs() < TOL);
        let e = entanglement_e(&psi).unwrap();
        prop_assert!(e >= -TOL && e <= (b.min(c) as f64).log2() + TOL);
    }

    #[test]
    fn partial_transpose_is_a_trace_preserving_involution(seed in any::<u64>(), (b, c) in dims()) {
        let mut rng = stream_rng(seed, 0);
        let shape = BipartiteShape::new(b, c).unwrap();
        let rho = random_density(&mut rng, b * c, b * c).into_matrix();
        let pt = partial_transpose(&rho, shape).unwrap();
        let back = partial_transpose(&pt, shape).unwrap();
        prop_assert!((&back - &rho).norm() < TOL);
        prop_assert!((trace_re(&pt) - 1.0).abs() < TOL);
        prop_assert!((&pt - pt.adjoint()).norm() < TOL);
        // products stay PPT
        let prod = kron(
            &random_density(&mut rng, b, b).into_matrix(),
            &random_density(&mut rng, c, c).into_matrix(),
        );
        let m = PovmElement::new(prod * C64::from(0.5), shape).unwrap();
        prop_assert!(m.ppt_check(TOL).is_ppt);
    }

    #[test]
    fn entropy_is_concave_and_bounded(seed in any::<u64>(), d in 1usize..=6, p in 0.0f64..=1.0) {
        let mut rng = stream_rng(seed, 0);
        let rho = random_density(&mut rng, d, d);
        let sigma = random_density(&mut rng, d, d);
        let mix = rho.matrix() * C64::from(p) + sigma.matrix() * C64::from(1.0 - p);
        let mixed = DensityOperator::new(mix).unwrap();
        let s_mix = von_neumann_entropy(&mixed);
        let avg = p * von_neumann_entropy(&rho) + (1.0 - p) * von_neumann_entropy(&sigma);
        prop_assert!(s_mix >= avg - TOL);
        prop_assert!(s_mix <= (d as f64).log2() + TOL);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -TOL);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-7);
    }

    #[test]
    fn channel_entropies_obey_tripartite_purity(
        seed in any::<u64>(),
        d_a in 1usize..=4,
        (d_b, d_c) in (1usize..=4, 1usize..=4),
    ) {
        prop_assume!(d_b * d_c >= d_a);
        let mut rng = stream_rng(seed, 0);
        let u = StinespringIsometry::new(haar_isometry(&mut rng, d_b * d_c, d_a), d_b, d_c).unwrap();
        // pure input: S(B) = S(C)
        let t = entropy_triple(&u, &DensityOperator::from_pure(&PureStateVector::basis(d_a, 0))).unwrap();
        prop_assert!(t.s_a.abs() < TOL);
        prop_assert!((t.s_b - t.s_c).abs() < 1e-8);
        // mixed input: S(A), S(B), S(C) are entropies of a tripartite pure state
        let rho = random_density(&mut rng, d_a, d_a);
        let t = entropy_triple(&u, &rho).unwrap();
        prop_assert!(t.s_a <= t.s_b + t.s_c + 1e-8);
        prop_assert!((t.s_b - t.s_c).abs() <= t.s_a + 1e-8);
        prop_assert!(t.s_b <= (d_b as f64).log2() + TOL && t.s_c <= (d_c as f64).log2() + TOL);
        let agg = lower_bound_aggregate(&u, &[rho]).unwrap();
        prop_assert!(agg.value >= 0.5 * (d_a as f64).log2() - 1e-7);
        prop_assert!(agg.value <= (d_a as f64).log2() + 1e-7);
    }

    #[test]
    fn simplex_projection_is_a_distribution(v in proptest::collection::vec(-5.0f64..5.0, 1..12)) {
        let p = project_to_simplex(&v);
        prop_assert_eq!(p.len(), v.len());
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // idempotent
        let q = project_to_simplex(&p);
        for (x, y) in p.iter().zip(&q) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_section_finds_parabola_vertex(center in -3.0f64..3.0, width in 0.1f64..5.0) {
        let (x, fx) = golden_section_min(|x| (x - center).powi(2) / width, -4.0, 4.0, 1e-10, 500);
        prop_assert!((x - center).abs() < 1e-4);
        prop_assert!(fx < 1e-8);
    }

    #[test]
    fn bounds_are_monotone(d in 2usize..64, eps in 0.0f64..0.5, delta in 0.0f64..3.0, step in 0.0f64..1.0) {
        prop_assert!(detector_bound_small_delta(d, eps + step * 0.5, delta) <= detector_bound_small_delta(d, eps, delta));
        prop_assert!(detector_bound_small_delta(d, eps, delta + step) <= detector_bound_small_delta(d, eps, delta));
        let a = upper_bound_cor6(d, delta).unwrap().value;
        let b = upper_bound_cor6(d, delta + step).unwrap().value;
        prop_assert!(a <= b);
        let alpha = 0.5 + 10.0 * step;
        let lo = prop7_dimension(3 + d, 3 + d, &SubspaceParams::with_alpha(alpha).unwrap()).unwrap().value;
        let hi = prop7_dimension(3 + d, 3 + d, &SubspaceParams::with_alpha(alpha + 1.0).unwrap()).unwrap().value;
        prop_assert!(lo <= hi);
    }
}

#[test]
fn povm_element_rejects_out_of_range_operators() {
    let shape = BipartiteShape::new(2, 2).unwrap();
    assert!(PovmElement::new(CMat::identity(4, 4) * C64::from(1.5), shape).is_err());
    assert!(PovmElement::new(CMat::identity(4, 4) * C64::from(-0.1), shape).is_err());
    assert!(PovmElement::new(CMat::identity(3, 3), shape).is_err());
    assert!(PovmElement::new(CMat::identity(4, 4), shape).is_ok());
}

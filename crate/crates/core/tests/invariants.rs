mod common;

use common::*;
use cstar_frames::random::{self, rng_from_seed};
use cstar_frames::*;
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = AlgebraSpec> {
    prop::collection::vec(1usize..=3, 1..=2).prop_map(|d| AlgebraSpec::new(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cstar_identity(spec in spec_strategy(), seed: u64) {
        let a = random::random_element(&spec, &mut rng_from_seed(seed));
        let n = a.cstar_norm();
        prop_assert!(((&a.adjoint() * &a).cstar_norm() - n * n).abs() <= 1e-10 * n * n.max(1.0));
        prop_assert!((a.adjoint().adjoint() == a));
    }

    #[test]
    fn positive_sqrt_squares_back(spec in spec_strategy(), seed: u64) {
        let a = random::random_positive_element(&spec, &mut rng_from_seed(seed));
        let r = a.positive_sqrt(1e-10).unwrap();
        prop_assert!(r.is_positive(1e-10));
        prop_assert!((&(&r * &r) - &a).max_abs_entry() <= 1e-10 * a.cstar_norm().max(1.0));
    }

    #[test]
    fn loewner_reflexive_and_transitive(spec in spec_strategy(), seed: u64) {
        let mut rng = rng_from_seed(seed);
        let a = random::random_element(&spec, &mut rng);
        let a = &a + &a.adjoint();
        let b = &a + &random::random_positive_element(&spec, &mut rng);
        let c = &b + &random::random_positive_element(&spec, &mut rng);
        prop_assert!(a.loewner_leq(&a, 1e-10).unwrap());
        prop_assert!(a.loewner_leq(&b, 1e-10).unwrap());
        prop_assert!(b.loewner_leq(&c, 1e-10).unwrap());
        prop_assert!(a.loewner_leq(&c, 1e-10).unwrap());
    }

    #[test]
    fn realization_is_a_star_homomorphism(spec in spec_strategy(), m in 1usize..=3, k in 1usize..=3, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let t1 = random::random_operator(&spec, m, k, &mut rng);
        let t2 = random::random_operator(&spec, k, m, &mut rng);
        let prod = t1.compose(&t2).unwrap();
        let (r1, r2, rp) = (t1.realize(), t2.realize(), prod.realize());
        for b in 0..spec.num_blocks() {
            prop_assert!((&r1.blocks[b] * &r2.blocks[b] - &rp.blocks[b]).norm() <= 1e-10 * (1.0 + rp.blocks[b].norm()));
            prop_assert!((r1.blocks[b].adjoint() - &t1.adjoint().realize().blocks[b]).norm() <= 1e-14);
        }
        let back = ModuleOperator::from_realization(&spec, m, k, &r1).unwrap();
        prop_assert!(back.max_abs_diff(&t1) <= 1e-14);
        prop_assert!(t1.adjoint().adjoint() == t1);
    }

    #[test]
    fn penrose_identities(spec in spec_strategy(), m in 1usize..=3, inner in 1usize..=3, seed: u64) {
        let t = random::random_factored_operator(&spec, m, m, inner, &mut rng_from_seed(seed));
        let p = t.pseudo_inverse(RANK_TOL);
        let tp = t.compose(&p).unwrap();
        let pt = p.compose(&t).unwrap();
        let scale = t.operator_norm() * p.operator_norm();
        prop_assert!(t.compose(&pt).unwrap().max_abs_diff(&t) <= 1e-9 * t.operator_norm().max(1.0) * scale.max(1.0));
        prop_assert!(p.compose(&tp).unwrap().max_abs_diff(&p) <= 1e-9 * p.operator_norm().max(1.0) * scale.max(1.0));
        prop_assert!(tp.adjoint().max_abs_diff(&tp) <= 1e-9 * scale.max(1.0));
        prop_assert!(pt.adjoint().max_abs_diff(&pt) <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn operator_inner_product_bound(spec in spec_strategy(), m in 1usize..=3, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let t = random::random_operator(&spec, m, m, &mut rng);
        let x = random::random_vector(&spec, m, &mut rng);
        let tx = t.apply(&x).unwrap();
        let bound = x.inner(&x).unwrap().scale(t.operator_norm().powi(2));
        prop_assert!(tx.inner(&tx).unwrap().loewner_leq(&bound, 1e-8).unwrap());
    }

    #[test]
    fn frame_operator_is_positive_and_bounded(spec in spec_strategy(), m in 1usize..=3, n in 1usize..=6, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let vectors: Vec<_> = (0..n).map(|_| random::random_vector(&spec, m, &mut rng)).collect();
        let frame = FrameSystem::new(vectors).unwrap();
        let d = dense_frame_operator(&spec, m, frame.vectors());
        let b = frame.optimal_frame_bounds();
        prop_assert!(frame.frame_operator().is_positive_operator(1e-10).unwrap());
        prop_assert!((b.upper - max_eig(&d)).abs() <= 1e-9 * b.upper.max(1.0));
        prop_assert!((b.lower - min_eig(&d).max(0.0)).abs() <= 1e-9 * b.upper.max(1.0));
        let x = random::random_vector(&spec, m, &mut rng);
        let sum = frame.frame_sum(&x).unwrap();
        let xx = x.inner(&x).unwrap();
        prop_assert!(sum.loewner_leq(&xx.scale(b.upper), 1e-8).unwrap());
        prop_assert!(xx.scale(b.lower).loewner_leq(&sum, 1e-8).unwrap());
    }

    #[test]
    fn generated_frames_meet_requested_lower_bound(spec in spec_strategy(), m in 1usize..=3, seed: u64) {
        let n = m * spec.max_block_dim() + 2;
        let frame = random_frame(&spec, m, n, seed, 1e-3).unwrap();
        let b = frame.optimal_frame_bounds();
        prop_assert!(b.lower >= 1e-3);
        prop_assert!(frame.verify_frame(1e-3, b.upper, BoundFlavor::Loewner, 1e-8));
    }
}

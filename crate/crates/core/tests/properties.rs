use std::sync::Arc;

use proptest::prelude::*;
use qubit_algebras::bundle::{l2_inner, pi_apply};
use qubit_algebras::convolution::ConvFunction;
use qubit_algebras::flips::SiteId;
use qubit_algebras::groupoid::{GroupElement, GroupoidElement};
use qubit_algebras::oracle::{self, DenseMatrix};
use qubit_algebras::sampling;
use qubit_algebras::strings::AlgebraElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sites(n: usize) -> Vec<SiteId> {
    (1..=n as u32).map(SiteId).collect()
}

fn dense(m: usize, a: &AlgebraElement) -> DenseMatrix {
    oracle::kron_string(m, a).unwrap()
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn string_product_matches_dense_product(seed in any::<u64>(), m in 1usize..=4) {
        let mut rng = rng_for(seed);
        let a = sampling::random_algebra_element(&mut rng, m, 3, m);
        let b = sampling::random_algebra_element(&mut rng, m, 3, m);
        let lhs = dense(m, &(&a * &b));
        prop_assert!(lhs.max_abs_diff(&dense(m, &a).matmul(&dense(m, &b))) < 1e-12);
        prop_assert!(dense(m, &a.string_adjoint()).max_abs_diff(&dense(m, &a).adjoint()) < 1e-14);
    }

    #[test]
    fn string_product_is_associative(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let [a, b, c] = [0; 3].map(|_| sampling::random_algebra_element(&mut rng, 4, 3, 3));
        prop_assert!((&(&a * &b) * &c).distance(&(&a * &(&b * &c))) < 1e-12);
    }

    #[test]
    fn distance_vanishes_exactly_on_equal_operators(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = rng_for(seed);
        let a = sampling::random_algebra_element(&mut rng, m, 3, m);
        let b = sampling::random_algebra_element(&mut rng, m, 3, m);
        // Pauli strings are orthogonal with tr(P†P) = 2^m, so ‖A‖_HS² = 2^m Σ|μ|²
        let diff = dense(m, &(&a - &b));
        let hs: f64 = diff.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let pauli: f64 = (&a - &b).pauli_expansion().values().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((hs - pauli * ((1u64 << m) as f64).sqrt()).abs() < 1e-10 * (1.0 + hs));
        prop_assert!(a.distance(&a) == 0.0);
    }

    #[test]
    fn apply_is_a_star_homomorphism(seed in any::<u64>(), m in 1usize..=5) {
        let mut rng = rng_for(seed);
        let pool = sites(m);
        let family = Arc::new(sampling::random_family(&mut rng, &pool));
        let a = sampling::random_algebra_element(&mut rng, m, 3, m);
        let b = sampling::random_algebra_element(&mut rng, m, 3, m);
        let u = sampling::random_state(&mut rng, &family, &pool, 5);
        let v = sampling::random_state(&mut rng, &family, &pool, 5);
        let lhs = (&a * &b).apply(&u);
        let rhs = a.apply(&b.apply(&u));
        prop_assert!((&lhs - &rhs).norm() < 1e-10);
        let left = a.apply(&u).inner(&v).unwrap();
        let right = u.inner(&a.string_adjoint().apply(&v)).unwrap();
        prop_assert!((left - right).norm() < 1e-10);
        prop_assert!(oracle::compare_apply(m, &a, &u).unwrap() < 1e-10);
    }

    #[test]
    fn state_embedding_preserves_inner_products(seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = rng_for(seed);
        let pool = sites(m);
        let family = Arc::new(sampling::random_family(&mut rng, &pool));
        let u = sampling::random_state(&mut rng, &family, &pool, 6);
        let v = sampling::random_state(&mut rng, &family, &pool, 6);
        let (du, dv) = (oracle::embed_state(m, &u).unwrap(), oracle::embed_state(m, &v).unwrap());
        prop_assert!((du.inner(&dv) - u.inner(&v).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn operator_norm_bounds_action(seed in any::<u64>(), m in 1usize..=4) {
        let mut rng = rng_for(seed);
        let pool = sites(m);
        let family = Arc::new(sampling::random_family(&mut rng, &pool));
        let a = sampling::random_algebra_element(&mut rng, m, 3, m);
        let u = sampling::random_state(&mut rng, &family, &pool, 4);
        let bound = oracle::operator_norm(m, &a).unwrap() * u.norm();
        prop_assert!(a.apply(&u).norm() <= bound * (1.0 + 1e-10) + 1e-12);
    }

    #[test]
    fn convolution_axioms(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let pool = sites(3);
        let points = sampling::random_orbit(&mut rng, "p", &pool, 8);
        let [f, g, h] = [0; 3].map(|_| sampling::random_conv_function(&mut rng, &points, &pool, 5));
        prop_assert!(f.convolve(&g).convolve(&h).distance(&f.convolve(&g.convolve(&h))) < 1e-12);
        prop_assert!(f.convolve(&g).involution().distance(&g.involution().convolve(&f.involution())) < 1e-12);
        prop_assert!(f.convolve(&g).i_norm() <= f.i_norm() * g.i_norm() + 1e-12);
        prop_assert!(f.involution().involution().distance(&f) == 0.0);
        let c = sampling::random_complex(&mut rng);
        prop_assert!(f.add(&g).scale(c).convolve(&h).distance(&f.scale(c).convolve(&h).add(&g.scale(c).convolve(&h))) < 1e-12);
    }

    #[test]
    fn group_algebra_embeds_homomorphically(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let pool = sites(4);
        let u = sampling::random_group_algebra_element(&mut rng, &pool, 5);
        let v = sampling::random_group_algebra_element(&mut rng, &pool, 5);
        prop_assert!(u.group_convolve(&v).distance(&v.group_convolve(&u)) < 1e-12);
        prop_assert!(u.group_convolve(&v).group_norm() <= u.group_norm() * v.group_norm() + 1e-12);
        let product = dense(4, &u.group_convolve(&v).embed());
        prop_assert!(product.max_abs_diff(&dense(4, &u.embed()).matmul(&dense(4, &v.embed()))) < 1e-12);
        prop_assert!(u.group_involution().embed().distance(&u.embed().string_adjoint()) < 1e-12);
    }

    #[test]
    fn groupoid_structure_maps(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let pool = sites(5);
        let x = sampling::random_orbit(&mut rng, "q", &pool, 1).remove(0);
        let g: GroupElement = sampling::random_group_element(&mut rng, &pool);
        let e = GroupoidElement::new(x, g);
        prop_assert_eq!(e.range().compose(&e).unwrap(), e.clone());
        prop_assert_eq!(e.compose(&e.domain()).unwrap(), e.clone());
        prop_assert_eq!(e.inverse().range(), e.domain());
        prop_assert_eq!(GroupoidElement::from_pair(&e.to_pair()).unwrap(), e.clone());
        prop_assert_eq!(e.inverse().to_pair(), e.to_pair().inverse());
        // the action is free
        prop_assert_eq!(e.target_point() == e.point, e.is_unit());
    }

    #[test]
    fn representation_is_linear_and_bounded(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let n = rng.random_range(1..=3);
        let pool = sites(n);
        let points = sampling::random_orbit(&mut rng, "r", &pool, 8);
        let f = sampling::random_conv_function(&mut rng, &points, &pool, 5);
        let h = sampling::random_conv_function(&mut rng, &points, &pool, 5);
        let family = Arc::new(sampling::random_family(&mut rng, &pool));
        let phi = sampling::random_section(&mut rng, &family, &points, &pool);
        let psi = sampling::random_section(&mut rng, &family, &points, &pool);
        let c = sampling::random_complex(&mut rng);

        let sum = pi_apply(&f.scale(c).add(&h), &phi);
        let parts = pi_apply(&f, &phi).scale(c).try_add(&pi_apply(&h, &phi)).unwrap();
        prop_assert!(sum.try_sub(&parts).unwrap().norm() < 1e-10);
        let lin = pi_apply(&f, &phi.scale(c).try_add(&psi).unwrap());
        let lin_parts = pi_apply(&f, &phi).scale(c).try_add(&pi_apply(&f, &psi)).unwrap();
        prop_assert!(lin.try_sub(&lin_parts).unwrap().norm() < 1e-10);

        prop_assert!(pi_apply(&f, &phi).norm() <= f.i_norm() * phi.norm() + 1e-10);
        let a = l2_inner(&pi_apply(&f.involution(), &phi), &psi).unwrap();
        let b = l2_inner(&phi, &pi_apply(&f, &psi)).unwrap();
        prop_assert!((a - b).norm() < 1e-10);
        let unit = ConvFunction::local_unit(&points);
        prop_assert!(pi_apply(&unit, &phi).try_sub(&phi).unwrap().norm() == 0.0);
    }
}

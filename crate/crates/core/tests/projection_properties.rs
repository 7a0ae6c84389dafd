mod common;

use common::{dist, tol};
use projgeom::projection::{
    ball_predicates, converse_kovarik, kovarik_certified, mv_equivalent, order_leq, ProjectionPath,
};
use projgeom::random::{close_pair, mixed_pair};
use projgeom::random::{random_idempotent, random_projection_with, rng_from_seed};
use projgeom::ComplexMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, max_global_rejects: 10_000, ..ProptestConfig::default() })]

    #[test]
    fn sum_and_difference_squares_add_to_one(seed in any::<u64>(), n in 1usize..=16, same in any::<bool>()) {
        let (p, q) = mixed_pair(&mut rng_from_seed(seed), n, same);
        let one = ComplexMatrix::identity(n);
        let s = &(p.matrix() + q.matrix()) - &one;
        let d = p.matrix() - q.matrix();
        prop_assert!((&(&(&s * &s) + &(&d * &d)) - &one).norm() <= 1e-12);
    }

    #[test]
    fn ball_predicates_agree_off_the_sphere(seed in any::<u64>(), n in 1usize..=16, same in any::<bool>()) {
        let (p, q) = mixed_pair(&mut rng_from_seed(seed), n, same);
        let report = ball_predicates(&p, &q, &tol()).unwrap();
        prop_assume!((report.norm_value - 1.0).abs() >= 1e-6);
        prop_assert!(report.agree(), "{:?}", report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kovarik_is_certified_when_it_succeeds(seed in any::<u64>(), n in 1usize..=10, oblique in any::<bool>()) {
        let mut rng = rng_from_seed(seed);
        let k = rand::Rng::random_range(&mut rng, 0..=n);
        let (p, q) = if oblique {
            (random_idempotent(&mut rng, n, k, 30.0).unwrap(), random_idempotent(&mut rng, n, k, 30.0).unwrap())
        } else {
            (
                random_projection_with(&mut rng, n, k).unwrap().as_idempotent(),
                random_projection_with(&mut rng, n, k).unwrap().as_idempotent(),
            )
        };
        if let Ok((r, cert)) = kovarik_certified(&p, &q, &tol()) {
            prop_assert!(cert.worst() <= 1e-8);
            prop_assert!(r.residual() <= 1e-8);
            let pair = converse_kovarik(&p, &q, &tol());
            if let Ok(pair) = pair {
                prop_assert!(pair.inverse_residual <= 1e-8);
            }
        }
    }

    #[test]
    fn equal_rank_and_ordered_means_equal(seed in any::<u64>(), n in 1usize..=12) {
        let mut rng = rng_from_seed(seed);
        let k = rand::Rng::random_range(&mut rng, 0..=n);
        let p = random_projection_with(&mut rng, n, k).unwrap();
        let q = random_projection_with(&mut rng, n, k).unwrap();
        prop_assert!(mv_equivalent(&p, &q).unwrap());
        if order_leq(&p, &q, &tol()).unwrap() {
            prop_assert!(dist(p.matrix(), q.matrix()) <= 1e-10);
        }
        prop_assert!(order_leq(&p, &p, &tol()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projection_path_stays_in_the_grassmannian(seed in any::<u64>(), n in 2usize..=10) {
        let (p, q) = close_pair(&mut rng_from_seed(seed), n, 0.95);
        let path = ProjectionPath::new(&p, &q, &tol()).unwrap();
        for s in 0..=100 {
            let g = path.at(s as f64 / 100.0, &tol()).unwrap();
            prop_assert!(g.idem_residual() <= 1e-8 && g.herm_residual() <= 1e-8);
            prop_assert_eq!(g.rank(), p.rank());
        }
        prop_assert!((path.at(0.0, &tol()).unwrap().matrix() - p.matrix()).max_abs() <= 1e-10);
        prop_assert!((path.at(1.0, &tol()).unwrap().matrix() - q.matrix()).max_abs() <= 1e-10);
    }
}

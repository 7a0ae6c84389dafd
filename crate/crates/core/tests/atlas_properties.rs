mod common;

use common::{dist, tol};
use projgeom::atlas::{
    chart_select, chart_select_exhaustive, classical_affine_coords, frame_affine_coords, frame_from_coords, phi,
    phi_inverse, projection_from_frame, standard_projection, AffineCoordinates, ChartIndex,
};
use projgeom::linalg::svd;
use projgeom::projection::ball_predicates;
use projgeom::random::{random_frame, random_matrix, random_projection_with, rng_from_seed};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chart_cover_and_round_trip(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let q = projection_from_frame(&random_frame(&mut rng, 4, 2), &tol()).unwrap();
        let i = chart_select(&q);
        prop_assert_eq!(i.k(), 2);
        prop_assert!(dist(q.matrix(), standard_projection(&i).matrix()) < 1.0);
        let a = classical_affine_coords(&q, &i, &tol()).unwrap();
        prop_assert!((&a - &frame_affine_coords(&q, &i, &tol()).unwrap()).norm() <= 1e-10 * a.norm().max(1.0));
        let back = projection_from_frame(&frame_from_coords(&i, &a).unwrap(), &tol()).unwrap();
        prop_assert!(dist(back.matrix(), q.matrix()) <= 1e-8);

        let best = chart_select_exhaustive(&q).unwrap();
        prop_assert!(dist(q.matrix(), standard_projection(&best).matrix()) < 1.0);
    }

    #[test]
    fn ball_membership_matches_minor_invertibility(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let k = rng.random_range(1..n);
        let q = random_projection_with(&mut rng, n, k).unwrap();
        let mut idx: Vec<usize> = (0..n).collect();
        for j in (1..n).rev() {
            idx.swap(j, rng.random_range(0..=j));
        }
        let mut chosen = idx[..k].to_vec();
        chosen.sort_unstable();
        let i = ChartIndex::new(n, chosen).unwrap();
        let report = ball_predicates(&standard_projection(&i), &q, &tol()).unwrap();
        let minor = q.range().basis().select_rows(i.indices());
        let invertible = svd(&minor).min() >= 1e-6;
        prop_assume!(svd(&minor).min() >= 1e-6 || svd(&minor).min() <= 1e-12);
        prop_assert_eq!(report.all(), invertible);
    }

    #[test]
    fn phi_separates_points(seed in any::<u64>(), n in 2usize..=8, scale in 1e-4f64..2.0) {
        let mut rng = rng_from_seed(seed);
        let k = rng.random_range(1..n);
        let p = random_projection_with(&mut rng, n, k).unwrap();
        let pc = p.matrix().complement();
        let mut point = |s: f64| {
            let x = &(&pc * &random_matrix(&mut rng, n, n).scale(s)) * p.matrix();
            phi_inverse(&AffineCoordinates::new(p.clone(), x).unwrap(), &tol()).unwrap()
        };
        let q1 = point(scale);
        let q2 = point(scale);
        prop_assume!(dist(q1.matrix(), q2.matrix()) >= 1e-4);
        let x1 = phi(&p, &q1, &tol()).unwrap();
        let x2 = phi(&p, &q2, &tol()).unwrap();
        prop_assert!(dist(x1.matrix(), x2.matrix()) >= 1e-8);
    }

    #[test]
    fn phi_at_standard_chart_is_classical(seed in any::<u64>(), n in 2usize..=7) {
        let mut rng = rng_from_seed(seed);
        let k = rng.random_range(1..n);
        let q = random_projection_with(&mut rng, n, k).unwrap();
        let i = chart_select(&q);
        let p = standard_projection(&i);
        prop_assume!(dist(p.matrix(), q.matrix()) < 0.999);
        let x = phi(&p, &q, &tol()).unwrap();
        let a = classical_affine_coords(&q, &i, &tol()).unwrap();
        prop_assert!(dist(&x.compressed(&i), &a) <= 1e-8);
    }
}

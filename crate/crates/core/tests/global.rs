mod common;

use pqbm_core::bodies::Body;
use pqbm_core::conditions::{theorem_main_check, ConditionInput};
use pqbm_core::global::{
    concavity_sweep, dilates_check, dilates_local_check, cfm_moment_check, midpoint_check, Verdict,
};
use pqbm_core::measures::{Density, Estimator};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn equal_bodies_have_zero_deficit(seed in 0u64..1000, lam in 0.0f64..=1.0, p in 0.0f64..=1.0) {
        let mut rng = common::rng(seed);
        let k = common::random_body(&mut rng, 2, 0.5);
        let q = p * 0.5;
        let r = midpoint_check(&k, &k, lam, p, q, &Density::Gaussian, &Estimator::monte_carlo(20_000, seed)).unwrap();
        prop_assert_eq!(r.deficit, 0.0);
        prop_assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn lebesgue_log_deficit_is_scale_free(seed in 0u64..1000, s in 0.5f64..3.0) {
        let mut rng = common::rng(seed);
        let k = common::random_polygon(&mut rng, 3, 0.5, 1.5);
        let l = common::random_polygon(&mut rng, 4, 0.5, 1.5);
        let e = Estimator::default();
        let a = midpoint_check(&k, &l, 0.4, 1.0, 0.0, &Density::Lebesgue, &e).unwrap();
        let b = midpoint_check(&k.scaled(s).unwrap(), &l.scaled(s).unwrap(), 0.4, 1.0, 0.0, &Density::Lebesgue, &e).unwrap();
        prop_assert!((a.deficit - b.deficit).abs() < 1e-10);
        prop_assert!((b.mu_m / a.mu_m - s * s).abs() < 1e-10 * s * s);
    }

    #[test]
    fn sufficient_condition_predicts_holds(seed in 0u64..1000, p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        let mut rng = common::rng(seed);
        let k = common::random_body(&mut rng, 2, 1.3);
        let l = common::random_body(&mut rng, 2, 1.3);
        let q = q.min(p);
        let r = k.inradius().min(l.inradius());
        let v = theorem_main_check(&ConditionInput::gaussian(2, p, q, r)).unwrap();
        prop_assume!(v.satisfied);
        let rep = midpoint_check(&k, &l, 0.5, p, q, &Density::Gaussian, &Estimator::monte_carlo(100_000, seed)).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::Holds);
    }
}

#[test]
fn measure_of_sum_grows_with_p() {
    let k = Body::cube(&[1.5, 0.7]).unwrap();
    let l = Body::ellipsoid(&[0.8, 1.6]).unwrap();
    let est = Estimator::monte_carlo(200_000, 3);
    let vals: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|p| midpoint_check(&k, &l, 0.5, *p, 0.0, &Density::Gaussian, &est).unwrap().mu_m)
        .collect();
    // common random numbers make the comparison pathwise
    for w in vals.windows(2) {
        assert!(w[0] <= w[1]);
    }
}

#[test]
fn rotated_squares_are_concave() {
    let sq = Body::cube(&[1.0, 1.0]).unwrap();
    let rot = Body::polytope(
        (0..4)
            .map(|i| pqbm_core::geom::Direction::from_angle(core::f64::consts::FRAC_PI_4 + i as f64 * core::f64::consts::FRAC_PI_2))
            .collect(),
        vec![1.0; 4],
    )
    .unwrap();
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let s = concavity_sweep(&sq, &rot, 1.0, 0.0, &Density::Lebesgue, &grid, &Estimator::default()).unwrap();
    assert!(s.concave);
    assert!(s.second_stderr.iter().all(|e| *e == 0.0));
}

#[test]
fn gaussian_box_and_ball_sweep() {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let s = concavity_sweep(
        &Body::cube(&[2.0, 2.0]).unwrap(),
        &Body::ball(2, 2.0).unwrap(),
        0.5,
        0.5,
        &Density::Gaussian,
        &grid,
        &Estimator::monte_carlo(200_000, 11),
    )
    .unwrap();
    assert!(s.concave);
}

#[test]
fn unit_dilation_is_flat() {
    let k = Body::cube(&[1.0, 0.5]).unwrap();
    let s = dilates_check(&k, 1.0, 0.3, &Density::Gaussian, &[0.0, 0.25, 0.5, 0.75, 1.0], &Estimator::default()).unwrap();
    assert!(s.second_differences.iter().all(|d| d.abs() < 1e-12));
    assert!(dilates_check(&k, 2.0, 0.3, &Density::Lebesgue, &[0.0, 0.25, 0.5, 0.75, 1.0], &Estimator::default()).is_err());
}

#[test]
fn full_space_moment_equalities() {
    let big = Body::ball(2, 1e3).unwrap();
    let c = cfm_moment_check(&big, &Density::Gaussian, &Estimator::default()).unwrap();
    assert!((c.variance - 4.0).abs() < 1e-8 && c.margin.abs() < 1e-8);
    let d = dilates_local_check(&big, 1.0, &Density::Gaussian, &Estimator::default()).unwrap();
    assert!((d.lhs - 4.0).abs() < 1e-8 && (d.rhs - 4.0).abs() < 1e-8);
    let small = dilates_local_check(&Body::ball(2, 1.0).unwrap(), 0.5, &Density::Gaussian, &Estimator::default()).unwrap();
    assert_eq!(small.verdict, Verdict::Holds);
}

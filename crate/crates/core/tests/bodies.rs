mod common;

use pqbm_core::bodies::{contains, eval_grid, p_combine, p_mean, wulff, Body, PLANAR_GRID};
use pqbm_core::geom::Direction;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p_mean_is_monotone_in_p(a in 0.1f64..10.0, b in 0.1f64..10.0, lam in 0.0f64..=1.0, p in 0.0f64..1.0, dp in 0.0f64..1.0) {
        let q = (p + dp).min(1.0);
        prop_assert!(p_mean(a, b, lam, p) <= p_mean(a, b, lam, q) * (1.0 + 1e-12));
    }

    #[test]
    fn p_mean_lies_between_inputs(a in 0.1f64..10.0, b in 0.1f64..10.0, lam in 0.0f64..=1.0, p in 0.0f64..=1.0) {
        let m = p_mean(a, b, lam, p);
        prop_assert!(m >= a.min(b) * (1.0 - 1e-12) && m <= a.max(b) * (1.0 + 1e-12));
    }

    #[test]
    fn wulff_support_never_exceeds_the_mean(seed in 0u64..1000, lam in 0.05f64..0.95, p in 0.0f64..=1.0, idx in 0usize..PLANAR_GRID) {
        let mut rng = common::rng(seed);
        let k = common::random_body(&mut rng, 2, 0.5);
        let l = common::random_body(&mut rng, 2, 0.5);
        let m = wulff(&p_combine(&k, &l, lam, p).unwrap()).unwrap();
        let u = eval_grid(2).unwrap()[idx];
        let mean = p_mean(k.support(&u), l.support(&u), lam, p);
        prop_assert!(m.support(&u) <= mean * (1.0 + 1e-9));
        prop_assert!(m.support(&u) >= k.inradius().min(l.inradius()) * (1.0 - 1e-9));
    }

    #[test]
    fn interpolation_preserves_inclusion(seed in 0u64..1000, lam in 0.0f64..=1.0, p in 0.0f64..=1.0, t in 1.0f64..2.0) {
        let mut rng = common::rng(seed);
        let k = common::random_body(&mut rng, 2, 0.5);
        let l = k.scaled(t).unwrap();
        let m = wulff(&p_combine(&k, &l, lam, p).unwrap()).unwrap();
        prop_assert!(contains(&k, &m).unwrap());
        prop_assert!(contains(&m, &l).unwrap());
    }

    #[test]
    fn inradius_bounds_support(seed in 0u64..1000, n in 2usize..=3) {
        let mut rng = common::rng(seed);
        let k = common::random_body(&mut rng, n, 0.5);
        for _ in 0..16 {
            let u = common::random_direction(&mut rng, n);
            prop_assert!(k.support(&u) >= k.inradius() * (1.0 - 1e-9));
            prop_assert!(k.support(&u) <= k.circumradius() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn dilates_are_nested(seed in 0u64..1000, t in 1.01f64..3.0) {
        let mut rng = common::rng(seed);
        let k = common::random_body(&mut rng, 2, 0.5);
        let big = k.scaled(t).unwrap();
        prop_assert!(contains(&k, &big).unwrap());
        prop_assert!(!contains(&big, &k).unwrap());
    }
}

#[test]
fn combination_endpoints_are_exact() {
    let k = Body::cube(&[1.0, 2.0]).unwrap();
    let l = Body::ball(2, 1.5).unwrap();
    for p in [0.0, 0.5, 1.0] {
        assert_eq!(wulff(&p_combine(&k, &l, 1.0, p).unwrap()).unwrap(), k);
        assert_eq!(wulff(&p_combine(&k, &l, 0.0, p).unwrap()).unwrap(), l);
    }
}

#[test]
fn planar_minkowski_sum_of_squares() {
    let k = Body::cube(&[1.0, 1.0]).unwrap();
    let r = Body::polytope(
        (0..4).map(|i| Direction::from_angle(core::f64::consts::FRAC_PI_4 + i as f64 * core::f64::consts::FRAC_PI_2)).collect(),
        vec![1.0; 4],
    )
    .unwrap();
    let m = wulff(&p_combine(&k, &r, 0.5, 1.0).unwrap()).unwrap();
    // a regular octagon with inradius (1 + √2) / 2
    let s = 0.5 + 0.5 * 2f64.sqrt();
    let p = m.to_polytope().unwrap();
    assert_eq!(p.normals().len(), 8);
    assert!((m.support(&Direction::from_angle(0.0)) - s).abs() < 1e-12);
    let area = 8.0 * s * s * (core::f64::consts::PI / 8.0).tan();
    assert!((p.volume().unwrap() - area).abs() < 1e-12);
}

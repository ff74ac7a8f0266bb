mod common;

use pqbm_core::bodies::Body;
use pqbm_core::measures::{k2_estimate, measure, restricted_moment, Density, Estimator, Method};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn measure_grows_with_dilation(seed in 0u64..1000, t in 1.05f64..2.0) {
        let mut rng = common::rng(seed);
        let n = 2 + (seed % 2) as usize;
        let k = common::random_body(&mut rng, n, 0.4);
        for d in [Density::Lebesgue, Density::Gaussian] {
            let a = measure(&k, &d, &Estimator::default()).unwrap();
            let b = measure(&k.scaled(t).unwrap(), &d, &Estimator::default()).unwrap();
            prop_assert!(b.value > a.value);
        }
    }

    #[test]
    fn quadrature_agrees_with_monte_carlo(seed in 0u64..1000) {
        let mut rng = common::rng(seed);
        let k = common::random_body(&mut rng, 2, 0.4);
        let q = measure(&k, &Density::Gaussian, &Estimator::default().with_method(Method::PolarQuadrature)).unwrap();
        let mc = measure(&k, &Density::Gaussian, &Estimator::monte_carlo(100_000, seed)).unwrap();
        prop_assert!((q.value - mc.value).abs() <= 4.0 * mc.stderr + 1e-9);
    }

    #[test]
    fn lebesgue_volume_scales_homogeneously(seed in 0u64..1000, t in 0.5f64..2.0) {
        let mut rng = common::rng(seed);
        let n = 2 + (seed % 2) as usize;
        let k = common::random_body(&mut rng, n, 0.4);
        let a = measure(&k, &Density::Lebesgue, &Estimator::default()).unwrap().value;
        let b = measure(&k.scaled(t).unwrap(), &Density::Lebesgue, &Estimator::default()).unwrap().value;
        prop_assert!((b / a - t.powi(n as i32)).abs() < 1e-6 * t.powi(n as i32));
    }
}

#[test]
fn fixed_seed_is_reproducible() {
    let k = Body::cube(&[0.8, 1.2, 1.0]).unwrap();
    let a = measure(&k, &Density::Gaussian, &Estimator::monte_carlo(50_000, 7)).unwrap();
    let b = measure(&k, &Density::Gaussian, &Estimator::monte_carlo(50_000, 7)).unwrap();
    let c = measure(&k, &Density::Gaussian, &Estimator::monte_carlo(50_000, 8)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.value, c.value);
}

#[test]
fn quartic_laplacian_average() {
    // V = |x|^4/4: ΔV = (n + 2)|x|^2, so k2 = (n + 2) E|x|^2 / n
    let k = Body::ball(2, 1.0).unwrap();
    let d = Density::power(4.0).unwrap();
    let m2 = restricted_moment(&k, &d, 2, &Estimator::default()).unwrap().value;
    let k2 = k2_estimate(&k, &d, &Estimator::default()).unwrap().value;
    assert!((k2 - 2.0 * m2).abs() < 1e-10);
}

#[test]
fn small_ball_moments() {
    let k = Body::ball(3, 0.1).unwrap();
    let m2 = restricted_moment(&k, &Density::Gaussian, 2, &Estimator::default()).unwrap().value;
    // nearly uniform: 3r²/5
    assert!((m2 - 0.006).abs() < 1e-4);
}

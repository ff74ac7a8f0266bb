use pqbm_core::bodies::Body;
use pqbm_core::conditions::{
    gaussian_threshold_slacks, lebesgue_threshold, main_linear_slack, main_quadratic_slacks, poincare_estimate,
    prop_main_check, remark_conditions_check, theorem_main_check, ConditionInput, MAIN_BRANCH_1,
};
use pqbm_core::measures::{Density, Estimator};
use pqbm_core::Error;
use proptest::prelude::*;

fn input() -> impl Strategy<Value = ConditionInput> {
    (1usize..12, 0.0f64..=1.0, 0.0f64..=1.0, 0.1f64..5.0, 0.0f64..3.0, 0.0f64..3.0).prop_map(
        |(n, a, b, r, k1, k2)| ConditionInput {
            n,
            p: a.max(b),
            q: a.min(b),
            r,
            big_r: None,
            k1,
            k2,
            c_poin: None,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn linear_slack_monotone(c in input(), dp in 0.0f64..0.5, dq in 0.0f64..0.5, dr in 0.0f64..2.0) {
        let s = main_linear_slack(&c);
        let up_p = ConditionInput { p: (c.p + dp).min(1.0), ..c };
        let down_q = ConditionInput { q: (c.q - dq).max(0.0), ..c };
        let up_r = ConditionInput { r: c.r + dr, ..c };
        prop_assert!(main_linear_slack(&up_p) >= s - 1e-12);
        prop_assert!(main_linear_slack(&down_q) >= s - 1e-12);
        prop_assert!(main_linear_slack(&up_r) >= s - 1e-12);
    }

    #[test]
    fn quadratic_slacks_monotone(c in input(), dq in 0.0f64..0.5) {
        // decreasing in q wherever the side inequality holds
        let (a, b) = main_quadratic_slacks(&c);
        prop_assume!(b >= 0.0);
        let down = ConditionInput { q: (c.q - dq).max(0.0), ..c };
        prop_assert!(main_quadratic_slacks(&down).0 >= a - 1e-12);
    }

    #[test]
    fn verdict_matches_best_branch(c in input()) {
        let v = theorem_main_check(&c).unwrap();
        prop_assert_eq!(v.satisfied, v.slack >= 0.0);
        let lin = v.component(MAIN_BRANCH_1).unwrap().slack;
        prop_assert!(v.slack >= lin || !v.component(MAIN_BRANCH_1).unwrap().applicable);
    }

    #[test]
    fn gaussian_rows_agree_with_thresholds(n in 1usize..20, a in 0.0f64..=1.0, r in 0.1f64..5.0) {
        let c = ConditionInput::gaussian(n, a, 0.0, r);
        let g = gaussian_threshold_slacks(n, a, 0.0, r);
        prop_assert!((main_linear_slack(&c) - g[0]).abs() < 1e-9 * g[0].abs().max(1.0));
        let pr = prop_main_check(&c).unwrap();
        prop_assert!((pr.slack - g[3]).abs() < 1e-9 * g[3].abs().max(1.0));
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    let bad = [
        ConditionInput::gaussian(2, 0.2, 0.5, 1.0),
        ConditionInput::gaussian(2, 1.5, 0.0, 1.0),
        ConditionInput::gaussian(2, 0.5, 0.0, -1.0),
        ConditionInput { c_poin: Some(0.0), ..ConditionInput::gaussian(2, 0.5, 0.0, 1.0) },
        ConditionInput { big_r: Some(0.5), ..ConditionInput::gaussian(2, 0.5, 0.0, 1.0) },
    ];
    for c in bad {
        assert!(matches!(theorem_main_check(&c), Err(Error::InvalidInput(_))), "{c:?}");
    }
}

#[test]
fn p_sweep_crosses_at_threshold() {
    let (n, r) = (3usize, 1.0f64);
    let cross = 1.0 - 2.0 * r * r / (n as f64 + 1.0);
    let at = |p: f64| theorem_main_check(&ConditionInput::gaussian(n, p, 0.0, r)).unwrap();
    assert!(!at(cross - 1e-6).component(MAIN_BRANCH_1).unwrap().slack.is_sign_positive());
    assert!(at(cross + 1e-6).component(MAIN_BRANCH_1).unwrap().slack > 0.0);
}

#[test]
fn lebesgue_rows_are_out_of_hypothesis() {
    let c = ConditionInput { k1: 0.0, k2: 0.0, ..ConditionInput::gaussian(4, 0.9, 0.0, 1.0) };
    assert!(!theorem_main_check(&c).unwrap().in_hypothesis);
    let t = lebesgue_threshold(16, 0.1).unwrap();
    assert!((t.p_star - (1.0 - 0.1 / 8.0)).abs() < 1e-15);
    assert!(t.prior > t.p_star);
    assert_eq!(lebesgue_threshold(1, 5.0).unwrap().p_star, 0.0);
}

#[test]
fn poincare_form_uses_estimated_constant() {
    let k = Body::ellipsoid(&[2.0, 1.5]).unwrap();
    let rep = poincare_estimate(&k, &Density::Gaussian, 4, &Estimator::default()).unwrap();
    let (lo, hi) = rep.bracket();
    assert!(lo <= hi);
    assert!(hi > 1.0);
    let c = ConditionInput {
        c_poin: Some(rep.c_poin),
        ..ConditionInput::gaussian(2, 0.8, 0.1, k.inradius())
    };
    let v = remark_conditions_check(&c).unwrap();
    let floor = remark_conditions_check(&ConditionInput { c_poin: Some(1.0), ..c }).unwrap();
    // a smaller Poincaré constant can only help
    assert!(v.slack >= floor.slack - 1e-12);
}

#[test]
fn poincare_rejects_degenerate_inputs() {
    let k = Body::ball(4, 1.0).unwrap();
    assert!(matches!(
        poincare_estimate(&k, &Density::Gaussian, 2, &Estimator::default()),
        Err(Error::Unsupported(_))
    ));
    let k = Body::ball(2, 1.0).unwrap();
    assert!(poincare_estimate(&k, &Density::Gaussian, 0, &Estimator::default()).is_err());
}

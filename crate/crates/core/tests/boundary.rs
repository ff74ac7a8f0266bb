use pqbm_core::boundary::{
    local_form_max, local_form_value, pointwise_matrix_inequality_check, ray_decreasing_check, BoundaryGrid, GridFn,
    SmoothBody, SphereFn, TestFunctionBasis,
};
use pqbm_core::measures::Density;
use proptest::prelude::*;
use std::sync::OnceLock;

fn disk() -> &'static BoundaryGrid {
    static G: OnceLock<BoundaryGrid> = OnceLock::new();
    G.get_or_init(|| BoundaryGrid::new(&SmoothBody::ball(2, 1.0).unwrap(), Density::Lebesgue).unwrap())
}

fn ellipse() -> &'static BoundaryGrid {
    static G: OnceLock<BoundaryGrid> = OnceLock::new();
    G.get_or_init(|| BoundaryGrid::new(&SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap(), Density::Gaussian).unwrap())
}

fn trig(grid: &BoundaryGrid, c0: f64, coef: &[f64]) -> GridFn {
    let k = coef.len() / 2;
    let mut cos = vec![0.0; 2 * k];
    let mut sin = vec![0.0; 2 * k];
    for i in 0..k {
        cos[2 * i + 1] = coef[2 * i];
        sin[2 * i + 1] = coef[2 * i + 1];
    }
    SphereFn::Trig { c0, cos, sin }.sample(grid).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn form_is_monotone_in_q_and_reversed_in_p(
        c0 in -2.0f64..2.0,
        coef in prop::collection::vec(-1.0f64..1.0, 8),
        p in 0.0f64..=1.0,
        a in 0.0f64..=1.0,
        b in 0.0f64..=1.0,
    ) {
        let g = trig(ellipse(), c0, &coef);
        let (q1, q2) = (p * a.min(b), p * a.max(b));
        let lo = local_form_value(ellipse(), p, q1, &g).unwrap();
        let hi = local_form_value(ellipse(), p, q2, &g).unwrap();
        prop_assert!(lo <= hi + 1e-12 * hi.abs().max(1.0));
        let p2 = p + (1.0 - p) * a;
        let at_p2 = local_form_value(ellipse(), p2, q1, &g).unwrap();
        prop_assert!(at_p2 <= lo + 1e-12 * lo.abs().max(1.0));
    }

    #[test]
    fn support_direction_is_inert_on_the_disk(
        c0 in -2.0f64..2.0,
        coef in prop::collection::vec(-1.0f64..1.0, 8),
        t in -3.0f64..3.0,
    ) {
        let g = trig(disk(), c0, &coef);
        let h = SphereFn::Support.sample(disk()).unwrap();
        let base = local_form_value(disk(), 1.0, 1.0, &g).unwrap();
        let moved = local_form_value(disk(), 1.0, 1.0, &g.add_scaled(&h, t)).unwrap();
        prop_assert!((base - moved).abs() < 1e-9 * base.abs().max(1.0));
        prop_assert!(base <= 1e-9);
    }

    #[test]
    fn ray_inequality_for_nonnegative_functions(c0 in 1.0f64..3.0, coef in prop::collection::vec(-0.12f64..0.12, 8)) {
        let f = trig(ellipse(), c0, &coef);
        let r = ray_decreasing_check(ellipse(), &f).unwrap();
        prop_assert!(r.holds);
    }

    #[test]
    fn matrix_inequality_margin(
        entries in prop::collection::vec(-5.0f64..5.0, 9),
        v in prop::collection::vec(-5.0f64..5.0, 3),
        w in prop::collection::vec(-5.0f64..5.0, 3),
        a in 0.01f64..100.0,
        b in 0.01f64..100.0,
    ) {
        let mut m = entries.clone();
        for i in 0..3 {
            for j in 0..3 {
                m[3 * i + j] = 0.5 * (entries[3 * i + j] + entries[3 * j + i]);
            }
        }
        prop_assert!(pointwise_matrix_inequality_check(&m, &v, &w, a, b).unwrap() >= -1e-9);
    }
}

#[test]
fn ellipse_gaussian_inside_the_sufficient_region() {
    // inradius 1, n = 2: 2 - 4q - 3(1 - p) >= 0 at (0.9, 0.4)
    let basis = TestFunctionBasis::default_for(2).unwrap();
    let r = local_form_max(ellipse(), 0.9, 0.4, &basis).unwrap();
    assert!(r.holds, "max eigenvalue {}", r.max_eigenvalue);
}

#[test]
fn sphere_with_polynomial_basis() {
    let grid = BoundaryGrid::new(&SmoothBody::ball(3, 1.0).unwrap(), Density::Lebesgue).unwrap();
    let basis = TestFunctionBasis::even_polynomials(4);
    let r = local_form_max(&grid, 1.0, 1.0, &basis).unwrap();
    assert!(r.max_eigenvalue.abs() <= r.tol);
    let r0 = local_form_max(&grid, 1.0, 0.0, &basis).unwrap();
    assert!(r0.max_eigenvalue < 0.0);
}

#[test]
fn smoothed_box_needs_positive_curvature() {
    let b = SmoothBody::smoothed_box(1.0, 0.6, 0.05, 0.05).unwrap();
    let grid = BoundaryGrid::new(&b, Density::Gaussian).unwrap();
    assert!(grid.nodes().iter().all(|nd| nd.det > 0.0));
    assert!(SmoothBody::trig(1.0, vec![0.0, 0.5], vec![0.0, 0.0]).is_err());
}

//! Closed-form and one-dimensional-quadrature measures of catalog bodies.

use num_traits::Float;

use super::density::Density;
use crate::bodies::{Body, Family, Shape};
use crate::quad::{integrate, normal_interval_mass, unit_ball_volume, unit_sphere_area};

fn lgamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Mass of the centred ball of radius `r` under a radial density.
pub(crate) fn radial_ball_mass(density: &Density, n: usize, r: f64) -> f64 {
    match density {
        Density::Lebesgue => unit_ball_volume(n) * r.powi(n as i32),
        Density::Gaussian if n == 2 => -(-0.5 * r * r).exp_m1(),
        _ => {
            let top = r.min(density.negligible_radius());
            let area = unit_sphere_area(n);
            area * integrate(
                |t| t.powi(n as i32 - 1) * density.weight_radial(t, n),
                0.0,
                top,
                1e-16,
                1e-14,
            )
            .value
        }
    }
}

fn lebesgue_volume(f: &Family) -> f64 {
    let n = f.dim();
    let nf = n as f64;
    match f {
        Family::Ball { r, .. } => unit_ball_volume(n) * r.powi(n as i32),
        Family::Box { half } => half.iter().map(|a| 2.0 * a).product(),
        Family::Ellipsoid { axes } => unit_ball_volume(n) * axes.iter().product::<f64>(),
        Family::CrossPolytope { scale, .. } => (2.0 * scale).powi(n as i32) / libm::tgamma(nf + 1.0),
        Family::LqBall { q, scale, .. } => {
            if q.is_infinite() {
                (2.0 * scale).powi(n as i32)
            } else {
                // |B_q^n| = (2 Γ(1 + 1/q))^n / Γ(1 + n/q)
                let log = nf * (2.0f64.ln() + lgamma(1.0 + 1.0 / q)) - lgamma(1.0 + nf / q);
                log.exp() * scale.powi(n as i32)
            }
        }
    }
}

/// Closed-form (or exact one-dimensional quadrature) measure, if the body
/// and density admit one.
pub fn closed_form(k: &Body, density: &Density) -> Option<f64> {
    let n = k.dim();
    match (k.shape(), density) {
        (Shape::Family(f), Density::Lebesgue) => Some(lebesgue_volume(f)),
        (Shape::Polytope(p), Density::Lebesgue) => p.volume(),
        (Shape::Translated { base, .. }, Density::Lebesgue) => closed_form(base, density),
        (Shape::Family(Family::Box { half }), Density::Gaussian) => {
            Some(half.iter().map(|a| normal_interval_mass(*a)).product())
        }
        (Shape::Family(Family::Ball { r, .. }), d) => Some(radial_ball_mass(d, n, *r)),
        (Shape::Family(Family::LqBall { q, dim, scale }), Density::Gaussian) if q.is_infinite() => {
            Some(normal_interval_mass(*scale).powi(*dim as i32))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn lebesgue_volumes() {
        let b = Body::ball(2, 1.0).unwrap();
        assert!((closed_form(&b, &Density::Lebesgue).unwrap() - PI).abs() < 1e-14);
        let x = Body::from_family(Family::cross_polytope(3, 1.0).unwrap()).unwrap();
        assert!((closed_form(&x, &Density::Lebesgue).unwrap() - 8.0 / 6.0).abs() < 1e-14);
        // l_2 ball formula reduces to the Euclidean ball
        let q = Body::from_family(Family::lq_ball(3, 2.0, 1.0).unwrap()).unwrap();
        assert!((closed_form(&q, &Density::Lebesgue).unwrap() - 4.0 * PI / 3.0).abs() < 1e-13);
        // cross-polytope through its polytope representation
        let p = x.to_polytope().unwrap();
        assert!((p.volume().unwrap() - 8.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_ball_radial() {
        for r in [0.5, 1.0, 2.0] {
            let m2 = radial_ball_mass(&Density::Gaussian, 2, r);
            assert!((m2 - (1.0 - (-r * r / 2.0).exp())).abs() < 1e-15);
            // chi_3 cdf: erf(r/√2) - sqrt(2/π) r e^{-r²/2}
            let m3 = radial_ball_mass(&Density::Gaussian, 3, r);
            let exact = libm::erf(r / 2f64.sqrt()) - (2.0 / PI).sqrt() * r * (-r * r / 2.0).exp();
            assert!((m3 - exact).abs() < 1e-14);
        }
    }
}

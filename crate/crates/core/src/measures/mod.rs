//! Log-concave densities and measure estimation on convex bodies.

mod density;
mod exact;
mod exec;
mod mc;
mod polar;

use alloc::vec::Vec;

pub use density::Density;
pub use exact::closed_form;
pub use exec::{Estimator, Executor, Method, Sequential, CHUNK, DEFAULT_BUDGET, MIN_BUDGET};
pub use mc::{JointSample, ObservableFn};
pub use polar::PolarIntegrals;

pub(crate) use mc::joint_mc;
pub(crate) use polar::polar_integrals;

use num_traits::Float;

use crate::bodies::Body;
use crate::error::{bail, ensure, Result};
use crate::geom::norm_sq;

/// A measure value with its uncertainty and provenance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureEstimate {
    pub value: f64,
    /// Monte Carlo standard error, quadrature error estimate, or 0 for
    /// closed forms.
    pub stderr: f64,
    pub method: Method,
    /// Samples (Monte Carlo) or integrand evaluations (quadrature).
    pub budget: u64,
    pub seed: Option<u64>,
}

fn no_obs(_: &[f64], _: &mut [f64]) {}

fn check_body(k: &Body) -> Result<()> {
    ensure!(k.inradius() > 0.0, Domain, "body must have positive inradius");
    ensure!(k.extents().iter().all(|e| e.is_finite()), Domain, "body is unbounded");
    Ok(())
}

/// Resolves `Auto` for a single body: closed form, then polar quadrature
/// (n <= 3), then Monte Carlo.
fn resolve(k: &Body, density: &Density, method: Method) -> Method {
    match method {
        Method::Auto if closed_form(k, density).is_some() => Method::ClosedForm,
        Method::Auto if k.dim() <= 3 => Method::PolarQuadrature,
        Method::Auto => Method::MonteCarlo,
        m => m,
    }
}

/// μ(K).
pub fn measure(k: &Body, density: &Density, est: &Estimator<'_>) -> Result<MeasureEstimate> {
    check_body(k)?;
    match resolve(k, density, est.method) {
        Method::ClosedForm => match closed_form(k, density) {
            Some(v) => Ok(MeasureEstimate {
                value: v,
                stderr: 0.0,
                method: Method::ClosedForm,
                budget: 0,
                seed: None,
            }),
            None => bail!(
                Unsupported,
                "no closed form for this body under the {} density",
                density.name()
            ),
        },
        Method::PolarQuadrature => {
            let p = polar_integrals(k, density, 0, &no_obs)?;
            Ok(MeasureEstimate {
                value: p.values[0],
                stderr: p.errors[0],
                method: Method::PolarQuadrature,
                budget: p.nodes,
                seed: None,
            })
        }
        _ => {
            let s = joint_mc(&[k], density, 0, &no_obs, est)?;
            Ok(MeasureEstimate {
                value: s.mean[0],
                stderr: s.cov[0].max(0.0).sqrt(),
                method: Method::MonteCarlo,
                budget: s.samples,
                seed: Some(est.seed),
            })
        }
    }
}

/// Restricted means `(1/μ(K)) ∫_K o_j dμ` with their covariance.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedMeans {
    pub means: Vec<f64>,
    /// Row-major covariance of `means`.
    pub cov: Vec<f64>,
    pub mass: MeasureEstimate,
}

impl RestrictedMeans {
    pub fn stderr(&self, j: usize) -> f64 {
        self.cov[j * self.means.len() + j].max(0.0).sqrt()
    }
}

/// Means of several observables under μ restricted to K.
pub fn restricted_means(
    k: &Body,
    density: &Density,
    n_obs: usize,
    obs: ObservableFn<'_>,
    est: &Estimator<'_>,
) -> Result<RestrictedMeans> {
    check_body(k)?;
    let method = match est.method {
        Method::Auto | Method::ClosedForm if k.dim() <= 3 => Method::PolarQuadrature,
        Method::Auto | Method::ClosedForm => Method::MonteCarlo,
        m => m,
    };
    let d = 1 + n_obs;
    let (s, cov_s, mass) = if method == Method::PolarQuadrature {
        let p = polar_integrals(k, density, n_obs, obs)?;
        let mut cov = alloc::vec![0.0; d * d];
        for j in 0..d {
            cov[j * d + j] = p.errors[j] * p.errors[j];
        }
        let mass = MeasureEstimate {
            value: p.values[0],
            stderr: p.errors[0],
            method,
            budget: p.nodes,
            seed: None,
        };
        (p.values, cov, mass)
    } else {
        let j = joint_mc(&[k], density, n_obs, obs, est)?;
        let mass = MeasureEstimate {
            value: j.mean[0],
            stderr: j.cov[0].max(0.0).sqrt(),
            method: Method::MonteCarlo,
            budget: j.samples,
            seed: Some(est.seed),
        };
        (j.mean, j.cov, mass)
    };
    ensure!(s[0] > 0.0, Numeric, "estimated measure is not positive");
    let means: Vec<f64> = (0..n_obs).map(|j| s[1 + j] / s[0]).collect();
    // delta method for ratios sharing the denominator
    let grad = |j: usize, i: usize| -> f64 {
        if i == 0 {
            -s[1 + j] / (s[0] * s[0])
        } else if i == 1 + j {
            1.0 / s[0]
        } else {
            0.0
        }
    };
    let mut cov = alloc::vec![0.0; n_obs * n_obs];
    for a in 0..n_obs {
        for b in 0..n_obs {
            let mut acc = 0.0;
            for i in 0..d {
                for j in 0..d {
                    acc += grad(a, i) * cov_s[i * d + j] * grad(b, j);
                }
            }
            cov[a * n_obs + b] = acc;
        }
    }
    Ok(RestrictedMeans { means, cov, mass })
}

/// A value with a one-sigma uncertainty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// `(∫_K ΔV dμ) / (n μ(K))`.
pub fn k2_estimate(k: &Body, density: &Density, est: &Estimator<'_>) -> Result<Estimate> {
    check_body(k)?;
    match density {
        Density::Gaussian => Ok(Estimate { value: 1.0, stderr: 0.0 }),
        Density::Lebesgue => Ok(Estimate { value: 0.0, stderr: 0.0 }),
        _ => {
            let n = k.dim() as f64;
            let lap = |x: &[f64], o: &mut [f64]| o[0] = density.laplacian_v(x);
            let r = restricted_means(k, density, 1, &lap, est)?;
            Ok(Estimate {
                value: r.means[0] / n,
                stderr: r.stderr(0) / n,
            })
        }
    }
}

/// `(1/μ(K)) ∫_K |x|^power dμ` for `power` in {2, 4}.
pub fn restricted_moment(k: &Body, density: &Density, power: u32, est: &Estimator<'_>) -> Result<Estimate> {
    ensure!(power == 2 || power == 4, InvalidInput, "moment power must be 2 or 4, got {power}");
    let f = move |x: &[f64], o: &mut [f64]| o[0] = norm_sq(x).powi(power as i32 / 2);
    let r = restricted_means(k, density, 1, &f, est)?;
    Ok(Estimate {
        value: r.means[0],
        stderr: r.stderr(0),
    })
}

/// Both sides of `E_K |∇V|^2 <= E_K ΔV`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub stderr: f64,
    pub holds: bool,
}

pub fn grad_v_bound_check(k: &Body, density: &Density, est: &Estimator<'_>) -> Result<GradBoundReport> {
    let f = |x: &[f64], o: &mut [f64]| {
        let mut g = [0.0; crate::geom::MAX_DIM];
        density.grad_v(x, &mut g[..x.len()]);
        o[0] = norm_sq(&g[..x.len()]);
        o[1] = density.laplacian_v(x);
    };
    let r = restricted_means(k, density, 2, &f, est)?;
    let (lhs, rhs) = (r.means[0], r.means[1]);
    let var = r.cov[0] + r.cov[3] - 2.0 * r.cov[1];
    let stderr = var.max(0.0).sqrt();
    let margin = rhs - lhs;
    Ok(GradBoundReport {
        lhs,
        rhs,
        margin,
        stderr,
        holds: margin >= -3.0 * stderr - 1e-12 * rhs.abs().max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::normal_cdf;
    use core::f64::consts::PI;

    #[test]
    fn closed_form_examples() {
        let e = Estimator::default();
        let b = Body::ball(2, 1.0).unwrap();
        assert!((measure(&b, &Density::Lebesgue, &e).unwrap().value - PI).abs() < 1e-14);
        let sq = Body::cube(&[1.0, 1.0]).unwrap();
        let m = measure(&sq, &Density::Gaussian, &e).unwrap();
        let phi = normal_cdf(1.0) - normal_cdf(-1.0);
        assert!((m.value - phi * phi).abs() < 1e-15);
        assert_eq!(m.stderr, 0.0);
    }

    #[test]
    fn polar_agrees_with_closed_form() {
        let e = Estimator::default().with_method(Method::PolarQuadrature);
        let sq = Body::cube(&[1.0, 2.0]).unwrap();
        let m = measure(&sq, &Density::Gaussian, &e).unwrap();
        let exact = closed_form(&sq, &Density::Gaussian).unwrap();
        assert!((m.value - exact).abs() < 1e-11, "{} vs {}", m.value, exact);
        let b3 = Body::ball(3, 1.5).unwrap();
        let m = measure(&b3, &Density::Gaussian, &e).unwrap();
        assert!((m.value - closed_form(&b3, &Density::Gaussian).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let b = Body::ellipsoid(&[1.0, 0.5]).unwrap();
        let e = Estimator::monte_carlo(20_000, 7);
        let a = measure(&b, &Density::Gaussian, &e).unwrap();
        let c = measure(&b, &Density::Gaussian, &e).unwrap();
        assert_eq!(a, c);
        assert!(measure(&b, &Density::Gaussian, &Estimator::monte_carlo(999, 7)).is_err());
    }

    #[test]
    fn k2_special_cases() {
        let b = Body::ball(3, 1.0).unwrap();
        let e = Estimator::default();
        assert_eq!(k2_estimate(&b, &Density::Gaussian, &e).unwrap().value, 1.0);
        assert_eq!(k2_estimate(&b, &Density::Lebesgue, &e).unwrap().value, 0.0);
    }

    #[test]
    fn full_space_gaussian_moments() {
        let b = Body::ball(2, 1e3).unwrap();
        let e = Estimator::default();
        let m2 = restricted_moment(&b, &Density::Gaussian, 2, &e).unwrap();
        let m4 = restricted_moment(&b, &Density::Gaussian, 4, &e).unwrap();
        assert!((m2.value - 2.0).abs() < 1e-9);
        assert!((m4.value - 8.0).abs() < 1e-8);
    }
}

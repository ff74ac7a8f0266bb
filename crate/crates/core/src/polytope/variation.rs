use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::facets::facet_measures;
use crate::bodies::{Body, Family, Shape};
use crate::boundary::{BoundaryGrid, SmoothBody};
use crate::error::{bail, ensure, Result};
use crate::geom::Direction;
use crate::measures::{joint_mc, measure, Density, Estimate, Estimator, Method};
use crate::quad::{gauss_legendre, integrate, unit_sphere_area};

/// Directions used to discretize perturbed planar Wulff shapes.
pub const VARIATION_DIRECTIONS: usize = 4096;

/// The function `w` in `W(h_K + ε w)`.
#[derive(Clone, Copy)]
pub enum Perturbation<'a> {
    Constant(f64),
    /// `w = h_L - h_K`.
    Towards(&'a Body),
    Custom(&'a dyn Fn(&Direction) -> f64),
}

impl core::fmt::Debug for Perturbation<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Perturbation::Constant(c) => write!(f, "Constant({c})"),
            Perturbation::Towards(l) => write!(f, "Towards({:?})", l.shape()),
            Perturbation::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl Perturbation<'_> {
    pub fn eval(&self, k: &Body, u: &Direction) -> f64 {
        match self {
            Perturbation::Constant(c) => *c,
            Perturbation::Towards(l) => l.support(u) - k.support(u),
            Perturbation::Custom(f) => f(u),
        }
    }
}

/// `∫ w dσ_{μ,K}`: facet sums for polytopes, boundary quadrature for balls
/// and ellipsoids.
pub fn surface_integral(k: &Body, w: Perturbation<'_>, density: &Density) -> Result<Estimate> {
    let n = k.dim();
    match k.shape() {
        Shape::Family(Family::Ball { r, .. }) => {
            let r = *r;
            let radial = density.weight_radial(r, n) * r.powi(n as i32 - 1);
            let sphere = match (n, w) {
                (_, Perturbation::Constant(c)) => c * unit_sphere_area(n),
                (2, _) => {
                    let i = integrate(|t| w.eval(k, &Direction::from_angle(t)), 0.0, 2.0 * PI, 1e-300, 1e-13);
                    ensure!(i.converged, Numeric, "circle quadrature did not converge");
                    i.value
                }
                (3, _) => {
                    let (zs, wz) = gauss_legendre(64);
                    let nphi = 128;
                    let mut acc = 0.0;
                    for (z, wi) in zs.iter().zip(&wz) {
                        let s = (1.0 - z * z).sqrt();
                        for j in 0..nphi {
                            let phi = 2.0 * PI * (j as f64 + 0.5) / nphi as f64;
                            let u = Direction::from_slice_unchecked(&[s * phi.cos(), s * phi.sin(), *z]);
                            acc += wi * 2.0 * PI / nphi as f64 * w.eval(k, &u);
                        }
                    }
                    acc
                }
                _ => bail!(Unsupported, "non-constant perturbations of balls need n <= 3"),
            };
            Ok(Estimate {
                value: radial * sphere,
                stderr: 0.0,
            })
        }
        Shape::Family(Family::Ellipsoid { axes }) if n <= 3 => {
            let grid = BoundaryGrid::new(&SmoothBody::ellipsoid(axes)?, *density)?;
            let mut acc = 0.0;
            for nd in grid.nodes() {
                acc += nd.weight * w.eval(k, &Direction::from_slice_unchecked(&nd.u[..n]));
            }
            Ok(Estimate { value: acc, stderr: 0.0 })
        }
        _ => {
            let Some(p) = k.to_polytope() else {
                bail!(Unsupported, "no surface measure for this body");
            };
            let t = facet_measures(&p, density)?;
            let mut value = 0.0;
            let mut var = 0.0;
            for ((u, m), e) in p.normals().iter().zip(&t.measures).zip(&t.stderr) {
                let wu = w.eval(k, u);
                value += wu * m;
                var += (wu * e).powi(2);
            }
            Ok(Estimate {
                value,
                stderr: var.sqrt(),
            })
        }
    }
}

/// Convergence of `Δ(ε) = (μ(W(h_K + εw)) - μ(K)) / ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstVariationReport {
    pub eps: Vec<f64>,
    pub deltas: Vec<f64>,
    pub delta_stderr: Vec<f64>,
    pub surface: Estimate,
    /// Richardson extrapolation from the two smallest `ε`.
    pub extrapolated: f64,
    /// Combined uncertainty of the extrapolation (noise and truncation).
    pub extrapolated_stderr: f64,
    /// Fitted exponent of `|Δ(ε) - ∫w dσ|` in `ε`; `None` when every error
    /// is below the noise level.
    pub rate: Option<f64>,
    pub within_tolerance: bool,
}

fn perturbed_pair(k: &Body, w: Perturbation<'_>, eps: f64) -> Result<(Body, Body)> {
    let n = k.dim();
    if let (Shape::Family(Family::Ball { r, .. }), Perturbation::Constant(c)) = (k.shape(), w) {
        ensure!(r + eps * c > 0.0, Domain, "h_K + εw is not positive; shrink ε");
        return Ok((Body::ball(n, r + eps * c)?, k.clone()));
    }
    ensure!(n == 2, Unsupported, "first variation needs n = 2 or a ball with constant w");
    let mut dirs: Vec<Direction> = (0..VARIATION_DIRECTIONS)
        .map(|j| Direction::from_angle(2.0 * PI * j as f64 / VARIATION_DIRECTIONS as f64))
        .collect();
    if let Some((ns, _)) = k.halfspaces() {
        dirs.extend(ns);
    }
    if let Perturbation::Towards(l) = w {
        if let Some((ns, _)) = l.halfspaces() {
            dirs.extend(ns);
        }
    }
    let hk: Vec<f64> = dirs.iter().map(|u| k.support(u)).collect();
    let he: Vec<f64> = dirs.iter().zip(&hk).map(|(u, h)| h + eps * w.eval(k, u)).collect();
    ensure!(he.iter().all(|h| *h > 0.0), Domain, "h_K + εw is not positive; shrink ε");
    let base = if matches!(k.shape(), Shape::Polytope(_)) || k.halfspaces().is_some() {
        k.clone()
    } else {
        Body::polytope(dirs.clone(), hk)?
    };
    Ok((Body::polytope(dirs, he)?, base))
}

fn difference(a: &Body, b: &Body, density: &Density, est: &Estimator<'_>) -> Result<(f64, f64)> {
    if est.method == Method::MonteCarlo {
        let s = joint_mc(&[a, b], density, 0, &|_, _| {}, est)?;
        let var = s.cov_at(0, 0) + s.cov_at(1, 1) - 2.0 * s.cov_at(0, 1);
        return Ok((s.mean[0] - s.mean[1], var.max(0.0).sqrt()));
    }
    let ma = measure(a, density, est)?;
    let mb = measure(b, density, est)?;
    Ok((ma.value - mb.value, ma.stderr + mb.stderr))
}

pub fn first_variation_check(
    k: &Body,
    w: Perturbation<'_>,
    density: &Density,
    eps_grid: &[f64],
    est: &Estimator<'_>,
) -> Result<FirstVariationReport> {
    ensure!(eps_grid.len() >= 2, InvalidInput, "need at least two ε values");
    ensure!(
        eps_grid.iter().all(|e| e.is_finite() && *e > 0.0),
        InvalidInput,
        "ε values must be positive"
    );
    let mut eps = eps_grid.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    ensure!(eps.len() >= 2, InvalidInput, "need at least two distinct ε values");
    let surface = surface_integral(k, w, density)?;
    let mut deltas = Vec::with_capacity(eps.len());
    let mut delta_stderr = Vec::with_capacity(eps.len());
    for e in &eps {
        let (a, b) = perturbed_pair(k, w, *e)?;
        let (d, s) = difference(&a, &b, density, est)?;
        deltas.push(d / e);
        delta_stderr.push(s / e);
    }
    let m = eps.len();
    let rich = |i: usize, j: usize| {
        let (ea, eb) = (eps[i], eps[j]);
        let v = (ea * deltas[j] - eb * deltas[i]) / (ea - eb);
        let s = ((ea * delta_stderr[j]).powi(2) + (eb * delta_stderr[i]).powi(2)).sqrt() / (ea - eb);
        (v, s)
    };
    let (extrapolated, noise) = rich(m - 2, m - 1);
    let trunc = if m >= 3 {
        (extrapolated - rich(m - 3, m - 2).0).abs()
    } else {
        (extrapolated - deltas[m - 1]).abs()
    };
    let extrapolated_stderr = (noise * noise + trunc * trunc).sqrt();
    let scale = surface.value.abs().max(f64::MIN_POSITIVE);
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(&deltas)
        .zip(&delta_stderr)
        .filter_map(|((e, d), s)| {
            let err = (d - surface.value).abs();
            (err > 3.0 * s + 1e-12 * scale).then(|| (e.ln(), err.ln()))
        })
        .collect();
    let rate = (pts.len() >= 2).then(|| {
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    let total = (extrapolated_stderr.powi(2) + surface.stderr.powi(2)).sqrt();
    let within_tolerance = (extrapolated - surface.value).abs() <= 3.0 * total + 1e-9 * scale;
    Ok(FirstVariationReport {
        eps,
        deltas,
        delta_stderr,
        surface,
        extrapolated,
        extrapolated_stderr,
        rate,
        within_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_constant_perturbation() {
        let k = Body::ball(2, 1.0).unwrap();
        let r = first_variation_check(
            &k,
            Perturbation::Constant(1.0),
            &Density::Lebesgue,
            &[0.1, 0.05, 0.025],
            &Estimator::default(),
        )
        .unwrap();
        for (e, d) in r.eps.iter().zip(&r.deltas) {
            assert!((d - (2.0 * PI + PI * e)).abs() < 1e-12);
        }
        assert!((r.surface.value - 2.0 * PI).abs() < 1e-14);
        assert!((r.rate.unwrap() - 1.0).abs() < 1e-9);
        assert!(r.within_tolerance);
    }

    #[test]
    fn ellipse_surface_integral_is_perimeter() {
        let k = Body::ellipsoid(&[2.0, 1.0]).unwrap();
        let s = surface_integral(&k, Perturbation::Constant(1.0), &Density::Lebesgue).unwrap();
        let exact = SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap().reference_surface().unwrap();
        assert!((s.value - exact).abs() < 1e-10);
    }
}

//! Polar quadrature: integrate radially along each direction up to the
//! boundary, then over the circle (n = 2) or sphere (n = 3).

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::density::Density;
use super::mc::ObservableFn;
use crate::bodies::Body;
use crate::error::{bail, Result};
use crate::quad::{gauss_legendre, integrate_vec};

/// Integrals `∫_K (1, o_1, .., o_m) dμ` and their quadrature error estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarIntegrals {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub nodes: u64,
}

fn radial(
    k: &Body,
    density: &Density,
    centre: &[f64],
    dir: &[f64],
    n_obs: usize,
    obs: ObservableFn<'_>,
    out: &mut [f64],
    err: &mut f64,
) {
    let n = dir.len();
    let rho = k.radial(dir);
    let c_norm = crate::geom::norm(centre);
    let top = rho.min(c_norm + density.negligible_radius());
    let mut x = [0.0; crate::geom::MAX_DIM];
    let mut o = alloc::vec![0.0; n_obs];
    let (v, e, _) = integrate_vec(
        |t, slot: &mut [f64]| {
            for i in 0..n {
                x[i] = centre[i] + t * dir[i];
            }
            let w = t.powi(n as i32 - 1) * density.weight(&x[..n]);
            slot[0] = w;
            if n_obs > 0 {
                obs(&x[..n], &mut o);
                for j in 0..n_obs {
                    slot[1 + j] = w * o[j];
                }
            }
        },
        1 + n_obs,
        0.0,
        top,
        1e-300,
        1e-13,
    );
    out.copy_from_slice(&v);
    *err += e.iter().fold(0.0, |a: f64, b| a.max(*b));
}

pub(crate) fn polar_integrals(k: &Body, density: &Density, n_obs: usize, obs: ObservableFn<'_>) -> Result<PolarIntegrals> {
    let n = k.dim();
    let centre = k.centre();
    let m = 1 + n_obs;
    match n {
        2 => {
            let mut cuts: Vec<f64> = k.kink_angles();
            let base = -PI;
            for c in cuts.iter_mut() {
                while *c < base {
                    *c += 2.0 * PI;
                }
                while *c >= base + 2.0 * PI {
                    *c -= 2.0 * PI;
                }
            }
            cuts.push(base);
            cuts.push(base + 2.0 * PI);
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
            let mut values = alloc::vec![0.0; m];
            let mut errors = alloc::vec![0.0; m];
            let mut nodes = 0u64;
            let mut slot = alloc::vec![0.0; m];
            for w in cuts.windows(2) {
                let mut inner_err = 0.0;
                let (v, e, ok) = integrate_vec(
                    |theta, out: &mut [f64]| {
                        nodes += 1;
                        let dir = [theta.cos(), theta.sin()];
                        radial(k, density, &centre, &dir, n_obs, obs, &mut slot, &mut inner_err);
                        out.copy_from_slice(&slot);
                    },
                    m,
                    w[0],
                    w[1],
                    1e-300,
                    1e-12,
                );
                if !ok {
                    bail!(Numeric, "polar quadrature did not converge on [{}, {}]", w[0], w[1]);
                }
                for j in 0..m {
                    values[j] += v[j];
                    errors[j] += e[j] + inner_err * (w[1] - w[0]);
                }
            }
            Ok(PolarIntegrals { values, errors, nodes })
        }
        3 => {
            let coarse = sphere_rule(k, density, &centre, n_obs, obs, 48, 96);
            let fine = sphere_rule(k, density, &centre, n_obs, obs, 96, 192);
            let errors = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).collect();
            Ok(PolarIntegrals {
                values: fine,
                errors,
                nodes: (48 * 96 + 96 * 192) as u64,
            })
        }
        _ => bail!(Unsupported, "polar quadrature is implemented for n = 2, 3 only (got n = {n})"),
    }
}

fn sphere_rule(
    k: &Body,
    density: &Density,
    centre: &[f64],
    n_obs: usize,
    obs: ObservableFn<'_>,
    nz: usize,
    nphi: usize,
) -> Vec<f64> {
    let m = 1 + n_obs;
    let (zs, ws) = gauss_legendre(nz);
    let mut acc = alloc::vec![0.0; m];
    let mut slot = alloc::vec![0.0; m];
    let mut dummy = 0.0;
    let dphi = 2.0 * PI / nphi as f64;
    for (z, wz) in zs.iter().zip(&ws) {
        let s = (1.0 - z * z).sqrt();
        for j in 0..nphi {
            let phi = (j as f64 + 0.5) * dphi;
            let dir = [s * phi.cos(), s * phi.sin(), *z];
            radial(k, density, centre, &dir, n_obs, obs, &mut slot, &mut dummy);
            for t in 0..m {
                acc[t] += wz * dphi * slot[t];
            }
        }
    }
    acc
}

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use num_traits::Float;

use crate::bodies::Body;
use crate::error::{ensure, Result};
use crate::geom::norm_sq;
use crate::measures::{restricted_means, Density, Estimator, Method};

/// Rayleigh-quotient estimate of the Poincaré constant over polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareReport {
    /// Subspace minimum of `∫|∇f|² / Var f`: an estimate of `C_poin^{-2}`
    /// that can only err on the large side.
    pub inv_sq_estimate: f64,
    /// `1 / sqrt(inv_sq_estimate)`.
    pub c_poin: f64,
    /// Convexity lower bound `k1` on `C_poin^{-2}`.
    pub floor: f64,
    pub degree: u32,
    pub basis_size: usize,
    pub method: Method,
}

impl PoincareReport {
    /// `[k1, estimate]`.
    pub fn bracket(&self) -> (f64, f64) {
        (self.floor, self.inv_sq_estimate)
    }
}

fn exponents(n: usize, max_deg: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for d in 0..=max_deg {
        for a in 0..=d {
            if n == 2 {
                out.push([a, d - a, 0]);
            } else {
                for b in 0..=d - a {
                    out.push([a, b, d - a - b]);
                }
            }
        }
    }
    out
}

fn add(a: &[u32; 3], b: &[u32; 3]) -> [u32; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Relative eigenvalue floor for the covariance matrix of the basis.
const COV_FLOOR: f64 = 1e-14;

/// Smallest generalized eigenvalue of (`∫∇f_i·∇f_j`, `Cov(f_i, f_j)`) over
/// monomials of degree `1..=degree`, in coordinates scaled by the RMS radius.
pub fn poincare_estimate(k: &Body, density: &Density, degree: u32, est: &Estimator<'_>) -> Result<PoincareReport> {
    let n = k.dim();
    ensure!(n == 2 || n == 3, Unsupported, "Poincaré estimate is implemented for n = 2, 3");
    ensure!((1..=8).contains(&degree), InvalidInput, "basis degree must lie in 1..=8");
    ensure!(k.is_symmetric(), InvalidInput, "K must be origin-symmetric");
    let r2 = restricted_means(k, density, 1, &|x: &[f64], o: &mut [f64]| o[0] = norm_sq(x), est)?;
    let s = (r2.means[0] / n as f64).sqrt();
    ensure!(s > 0.0, Numeric, "degenerate second moment");
    let moments_idx = exponents(n, 2 * degree);
    let pos = |a: &[u32; 3]| moments_idx.iter().position(|b| b == a).unwrap_or(usize::MAX);
    let idx = moments_idx.clone();
    let obs = move |x: &[f64], o: &mut [f64]| {
        let mut y = [0.0; 3];
        for i in 0..x.len() {
            y[i] = x[i] / s;
        }
        for (slot, a) in o.iter_mut().zip(&idx) {
            let mut v = 1.0;
            for i in 0..3 {
                if a[i] > 0 {
                    v *= y[i].powi(a[i] as i32);
                }
            }
            *slot = v;
        }
    };
    let rm = restricted_means(k, density, moments_idx.len(), &obs, est)?;
    let mom = |a: &[u32; 3]| rm.means[pos(a)];
    let basis: Vec<[u32; 3]> = exponents(n, degree).into_iter().skip(1).collect();
    let m = basis.len();
    let mut a_mat = DMatrix::zeros(m, m);
    let mut b_mat = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let (ai, aj) = (&basis[i], &basis[j]);
            b_mat[(i, j)] = mom(&add(ai, aj)) - mom(ai) * mom(aj);
            let mut g = 0.0;
            for c in 0..n {
                if ai[c] == 0 || aj[c] == 0 {
                    continue;
                }
                let mut e = add(ai, aj);
                e[c] -= 2;
                g += (ai[c] * aj[c]) as f64 * mom(&e);
            }
            a_mat[(i, j)] = g;
        }
    }
    let be = SymmetricEigen::new(b_mat);
    let bmax = be.eigenvalues.iter().fold(0.0f64, |x, v| x.max(*v));
    let bmin = be.eigenvalues.iter().fold(f64::INFINITY, |x, v| x.min(*v));
    ensure!(
        bmax > 0.0 && bmin > COV_FLOOR * bmax,
        DegenerateBasis,
        "moment matrix is singular (eigenvalue ratio {:e})",
        bmin / bmax
    );
    let mut w = be.eigenvectors.clone();
    for j in 0..m {
        let f = 1.0 / be.eigenvalues[j].sqrt();
        for i in 0..m {
            w[(i, j)] *= f;
        }
    }
    let c = w.transpose() * &a_mat * &w;
    let c = (&c + c.transpose()) * 0.5;
    let ev = SymmetricEigen::new(c);
    let lam = ev.eigenvalues.iter().fold(f64::INFINITY, |x, v| x.min(*v));
    let inv_sq_estimate = lam / (s * s);
    Ok(PoincareReport {
        inv_sq_estimate,
        c_poin: 1.0 / inv_sq_estimate.sqrt(),
        floor: density.k1(),
        degree,
        basis_size: m,
        method: rm.mass.method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_neumann_eigenvalue() {
        let k = Body::ball(2, 1.0).unwrap();
        let r = poincare_estimate(&k, &Density::Lebesgue, 6, &Estimator::default()).unwrap();
        // square of the first zero of J1'
        let exact = 1.841_183_781_340_659_3f64.powi(2);
        assert!(r.inv_sq_estimate >= exact - 1e-9);
        assert!((r.inv_sq_estimate - exact).abs() < 1e-3, "{}", r.inv_sq_estimate);
    }

    #[test]
    fn gaussian_full_space_gap() {
        let k = Body::ball(2, 1e3).unwrap();
        let r = poincare_estimate(&k, &Density::Gaussian, 4, &Estimator::default()).unwrap();
        assert!((r.inv_sq_estimate - 1.0).abs() < 1e-6);
        assert_eq!(r.bracket().0, 1.0);
    }

    #[test]
    fn linear_basis_is_covariance_reciprocal() {
        let k = Body::cube(&[1.0, 0.5]).unwrap();
        let r = poincare_estimate(&k, &Density::Lebesgue, 1, &Estimator::default()).unwrap();
        // largest coordinate variance of the uniform box: a²/3 with a = 1
        assert!((r.inv_sq_estimate - 3.0).abs() < 1e-9);
    }
}

//! Quadratic forms and integral identities evaluated on a [`BoundaryGrid`].

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use num_traits::Float;

use super::grid::{BoundaryGrid, BoundaryNode, GridFn, TestFunctionBasis};
use crate::error::{bail, ensure, Result};
use crate::geom::{dot, frobenius_sq, trace, MAX_DIM};
use crate::measures::Density;
use crate::quad::{gauss_legendre, gauss_legendre_on};

fn check_pq(p: f64, q: f64) -> Result<()> {
    ensure!(
        (0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q),
        InvalidInput,
        "p and q must lie in [0, 1] (got p = {p}, q = {q})"
    );
    ensure!(q <= p, InvalidInput, "need q <= p (got p = {p}, q = {q})");
    Ok(())
}

fn quad_inv(nd: &BoundaryNode, m: usize, a: &[f64; 2], b: &[f64; 2]) -> f64 {
    if m == 1 {
        nd.curv_inv[0] * a[0] * b[0]
    } else {
        let c = &nd.curv_inv;
        a[0] * (c[0] * b[0] + c[1] * b[1]) + a[1] * (c[2] * b[0] + c[3] * b[1])
    }
}

/// `Q(g)` with rank-one coefficient `coef`.
fn form(grid: &BoundaryGrid, p: f64, coef: f64, g: &GridFn) -> Result<f64> {
    ensure!(g.values.len() == grid.len(), InvalidInput, "function does not match the grid");
    let m = grid.dim() - 1;
    let mut quad = 0.0;
    let mut mean = 0.0;
    for ((nd, v), gr) in grid.nodes().iter().zip(&g.values).zip(&g.grads) {
        quad += nd.weight * ((nd.mean_curv + (1.0 - p) / nd.h) * v * v - quad_inv(nd, m, gr, gr));
        mean += nd.weight * v;
    }
    Ok(quad - coef * mean * mean)
}

/// The infinitesimal (p,q)-form; a nonpositive value means the local
/// inequality holds in direction `g`.
pub fn local_form_value(grid: &BoundaryGrid, p: f64, q: f64, g: &GridFn) -> Result<f64> {
    check_pq(p, q)?;
    let n = grid.dim() as f64;
    form(grid, p, (n - q) / (n * grid.measure()), g)
}

/// Same form for Lebesgue measure with rank-one coefficient `(n - p) / n`.
pub fn improved_form_value(grid: &BoundaryGrid, p: f64, g: &GridFn) -> Result<f64> {
    ensure!(
        grid.density() == Density::Lebesgue,
        InvalidInput,
        "the improved form is defined for Lebesgue measure only"
    );
    ensure!((0.0..=1.0).contains(&p), InvalidInput, "p must lie in [0, 1]");
    let n = grid.dim() as f64;
    form(grid, p, (n - p) / (n * grid.measure()), g)
}

/// Matrices `M` and `G` with `Q(Σ c_i g_i) = cᵀ M c` and `G_ij = ∫ g_i g_j dμ_{∂K}`.
pub fn local_form_matrices(
    grid: &BoundaryGrid,
    p: f64,
    q: f64,
    basis: &TestFunctionBasis,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_pq(p, q)?;
    ensure!(!basis.is_empty(), InvalidInput, "empty test basis");
    let fs = basis.sample(grid)?;
    let k = fs.len();
    let n = grid.dim() as f64;
    let m = grid.dim() - 1;
    let coef = (n - q) / (n * grid.measure());
    let mut mat = DMatrix::zeros(k, k);
    let mut gram = DMatrix::zeros(k, k);
    let mut means = alloc::vec![0.0; k];
    for (idx, nd) in grid.nodes().iter().enumerate() {
        let a = nd.mean_curv + (1.0 - p) / nd.h;
        for i in 0..k {
            let (vi, gi) = (fs[i].values[idx], fs[i].grads[idx]);
            means[i] += nd.weight * vi;
            for j in i..k {
                let (vj, gj) = (fs[j].values[idx], fs[j].grads[idx]);
                mat[(i, j)] += nd.weight * (a * vi * vj - quad_inv(nd, m, &gi, &gj));
                gram[(i, j)] += nd.weight * vi * vj;
            }
        }
    }
    for i in 0..k {
        for j in i..k {
            mat[(i, j)] -= coef * means[i] * means[j];
            mat[(j, i)] = mat[(i, j)];
            gram[(j, i)] = gram[(i, j)];
        }
    }
    Ok((mat, gram))
}

/// Largest generalized eigenvalue of the local form on a basis span.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFormMax {
    pub max_eigenvalue: f64,
    /// Basis coefficients of a maximizer, scaled so the largest entry is 1.
    pub coefficients: Vec<f64>,
    /// All generalized eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `1e-8` times the largest entry of `M`.
    pub tol: f64,
    pub holds: bool,
}

/// Relative eigenvalue floor of the Gram matrix below which a basis counts as degenerate.
pub const GRAM_CONDITION_FLOOR: f64 = 1e-13;

pub fn local_form_max(grid: &BoundaryGrid, p: f64, q: f64, basis: &TestFunctionBasis) -> Result<LocalFormMax> {
    let (mat, gram) = local_form_matrices(grid, p, q, basis)?;
    let k = mat.nrows();
    let ge = SymmetricEigen::new(gram);
    let gmax = ge.eigenvalues.iter().fold(0.0f64, |a, v| a.max(*v));
    let gmin = ge.eigenvalues.iter().fold(f64::INFINITY, |a, v| a.min(*v));
    ensure!(
        gmax > 0.0 && gmin > GRAM_CONDITION_FLOOR * gmax,
        DegenerateBasis,
        "Gram matrix is singular (eigenvalue ratio {:e})",
        gmin / gmax
    );
    // whiten: W = V Λ^{-1/2}, then eig(Wᵀ M W)
    let mut w = ge.eigenvectors.clone();
    for j in 0..k {
        let s = 1.0 / ge.eigenvalues[j].sqrt();
        for i in 0..k {
            w[(i, j)] *= s;
        }
    }
    let mut c = w.transpose() * &mat * &w;
    c = (&c + c.transpose()) * 0.5;
    let e = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|a, b| e.eigenvalues[*b].total_cmp(&e.eigenvalues[*a]));
    let top = order[0];
    let coeff = &w * e.eigenvectors.column(top);
    let big = coeff.iter().fold(0.0f64, |a, v| if v.abs() > a.abs() { *v } else { a });
    let coefficients = coeff.iter().map(|v| v / big).collect();
    let tol = 1e-8 * mat.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let max_eigenvalue = e.eigenvalues[top];
    Ok(LocalFormMax {
        max_eigenvalue,
        coefficients,
        eigenvalues: order.iter().map(|i| e.eigenvalues[*i]).collect(),
        tol,
        holds: max_eigenvalue <= tol,
    })
}

/// A scalar field with analytic first and second derivatives.
pub trait ScalarField {
    fn dim(&self) -> usize;
    fn grad(&self, x: &[f64], out: &mut [f64]);
    /// Row-major Hessian.
    fn hess(&self, x: &[f64], out: &mut [f64]);
}

/// `u(x) = ½ xᵀ A x + bᵀ x`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticField {
    dim: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl QuadraticField {
    pub fn new(a: &[f64], b: &[f64]) -> Result<Self> {
        let n = b.len();
        ensure!(a.len() == n * n, InvalidInput, "Hessian must be n x n");
        for i in 0..n {
            for j in 0..n {
                ensure!(a[i * n + j] == a[j * n + i], InvalidInput, "Hessian must be symmetric");
            }
        }
        Ok(QuadraticField {
            dim: n,
            a: a.to_vec(),
            b: b.to_vec(),
        })
    }

    /// `|x|² / 2`.
    pub fn half_norm_sq(dim: usize) -> Self {
        let mut a = alloc::vec![0.0; dim * dim];
        for i in 0..dim {
            a[i * dim + i] = 1.0;
        }
        QuadraticField {
            dim,
            a,
            b: alloc::vec![0.0; dim],
        }
    }

    /// `x₁² - x₂²`.
    pub fn saddle(dim: usize) -> Self {
        let mut a = alloc::vec![0.0; dim * dim];
        a[0] = 2.0;
        a[dim + 1] = -2.0;
        QuadraticField {
            dim,
            a,
            b: alloc::vec![0.0; dim],
        }
    }

    /// `x₁ x₂`.
    pub fn cross(dim: usize) -> Self {
        let mut a = alloc::vec![0.0; dim * dim];
        a[1] = 1.0;
        a[dim] = 1.0;
        QuadraticField {
            dim,
            a,
            b: alloc::vec![0.0; dim],
        }
    }
}

impl ScalarField for QuadraticField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim;
        for i in 0..n {
            out[i] = self.b[i] + dot(&self.a[i * n..(i + 1) * n], x);
        }
    }

    fn hess(&self, _: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.a);
    }
}

/// Both sides of an integral identity and their difference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityReport {
    pub lhs: f64,
    pub interior: f64,
    pub boundary: f64,
    /// `lhs - interior - boundary`.
    pub residual: f64,
    /// Largest absolute term, for relative tolerances.
    pub scale: f64,
}

impl IdentityReport {
    fn new(lhs: f64, interior: f64, boundary: f64) -> Self {
        IdentityReport {
            lhs,
            interior,
            boundary,
            residual: lhs - interior - boundary,
            scale: lhs.abs().max(interior.abs()).max(boundary.abs()),
        }
    }

    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.abs()
        } else {
            self.residual.abs() / self.scale
        }
    }
}

const INTERIOR_ORDER: usize = 48;

/// `∫_K F dμ` through the cone over the boundary grid.
fn interior<F: FnMut(&[f64]) -> f64>(grid: &BoundaryGrid, mut f: F) -> f64 {
    let n = grid.dim();
    let density = grid.density();
    let rule = gauss_legendre(INTERIOR_ORDER);
    let mut pt = [0.0; MAX_DIM];
    let mut total = 0.0;
    for nd in grid.nodes() {
        let r = gauss_legendre_on(&rule, 0.0, 1.0, |t| {
            for i in 0..n {
                pt[i] = t * nd.x[i];
            }
            t.powi(n as i32 - 1) * density.weight(&pt[..n]) * f(&pt[..n])
        });
        total += nd.du * nd.h * nd.det * r;
    }
    total
}

fn check_field(grid: &BoundaryGrid, u: &dyn ScalarField) -> Result<()> {
    ensure!(u.dim() == grid.dim(), InvalidInput, "field dimension does not match the body");
    Ok(())
}

fn lu(density: &Density, u: &dyn ScalarField, x: &[f64], g: &mut [f64], hs: &mut [f64], gv: &mut [f64]) -> f64 {
    let n = x.len();
    u.grad(x, g);
    u.hess(x, hs);
    density.grad_v(x, gv);
    trace(hs, n) - dot(gv, g)
}

/// Residual of the weighted Bochner-Reilly identity
/// `∫(Lu)² = ∫ ‖∇²u‖² + ⟨∇²V ∇u, ∇u⟩ + ∫_{∂K} H u_n² - 2⟨∇u, ∇u_n⟩ + II(∇u, ∇u)`.
pub fn bochner_residual(grid: &BoundaryGrid, u: &dyn ScalarField) -> Result<IdentityReport> {
    check_field(grid, u)?;
    let n = grid.dim();
    let m = n - 1;
    let density = grid.density();
    let mut g = [0.0; MAX_DIM];
    let mut gv = [0.0; MAX_DIM];
    let mut hs = [0.0; MAX_DIM * MAX_DIM];
    let mut hv = [0.0; MAX_DIM * MAX_DIM];
    let lhs = interior(grid, |x| {
        let l = lu(&density, u, x, &mut g[..n], &mut hs[..n * n], &mut gv[..n]);
        l * l
    });
    let inner = interior(grid, |x| {
        u.grad(x, &mut g[..n]);
        u.hess(x, &mut hs[..n * n]);
        density.hess_v(x, &mut hv[..n * n]);
        let mut q = 0.0;
        for i in 0..n {
            q += g[i] * dot(&hv[i * n..(i + 1) * n], &g[..n]);
        }
        frobenius_sq(&hs[..n * n]) + q
    });
    let mut bnd = 0.0;
    for nd in grid.nodes() {
        let x = &nd.x[..n];
        let normal = &nd.u[..n];
        u.grad(x, &mut g[..n]);
        u.hess(x, &mut hs[..n * n]);
        let un = dot(&g[..n], normal);
        let mut hn = [0.0; MAX_DIM];
        for i in 0..n {
            hn[i] = dot(&hs[i * n..(i + 1) * n], normal);
        }
        let mut t = [0.0; 2];
        let mut s = [0.0; 2];
        for a in 0..m {
            t[a] = dot(&nd.frame[a][..n], &g[..n]);
            s[a] = dot(&nd.frame[a][..n], &hn[..n]);
        }
        // ∇_{∂K} u_n = Eᵀ∇²u n + II t with II = (D²h)^{-1} in the frame
        let mut ii_t = [0.0; 2];
        for a in 0..m {
            for b in 0..m {
                ii_t[a] += nd.curv_inv[a * 2 + b] * t[b];
            }
        }
        let mut grad_un = [0.0; 2];
        for a in 0..m {
            grad_un[a] = s[a] + ii_t[a];
        }
        let cross: f64 = (0..m).map(|a| t[a] * grad_un[a]).sum();
        let second: f64 = (0..m).map(|a| t[a] * ii_t[a]).sum();
        bnd += nd.weight * (nd.mean_curv * un * un - 2.0 * cross + second);
    }
    let r = IdentityReport::new(lhs, inner, bnd);
    ensure!(r.residual.is_finite(), Numeric, "Bochner quadrature produced a non-finite value");
    Ok(r)
}

/// Residual of `∫_K Lu dμ = ∫_{∂K} ⟨∇u, n_x⟩ dμ_{∂K}` (`interior` is 0).
pub fn divergence_residual(grid: &BoundaryGrid, u: &dyn ScalarField) -> Result<IdentityReport> {
    check_field(grid, u)?;
    let n = grid.dim();
    let density = grid.density();
    let mut g = [0.0; MAX_DIM];
    let mut gv = [0.0; MAX_DIM];
    let mut hs = [0.0; MAX_DIM * MAX_DIM];
    let lhs = interior(grid, |x| lu(&density, u, x, &mut g[..n], &mut hs[..n * n], &mut gv[..n]));
    let mut bnd = 0.0;
    for nd in grid.nodes() {
        u.grad(&nd.x[..n], &mut g[..n]);
        bnd += nd.weight * dot(&g[..n], &nd.u[..n]);
    }
    Ok(IdentityReport::new(lhs, 0.0, bnd))
}

/// Both sides of `μ(K) ∫ f²/⟨x,n_x⟩ dμ_{∂K} >= (1/n) (∫ f dμ_{∂K})²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

pub fn ray_decreasing_check(grid: &BoundaryGrid, f: &GridFn) -> Result<RayReport> {
    ensure!(f.values.len() == grid.len(), InvalidInput, "function does not match the grid");
    if f.values.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        bail!(InvalidInput, "f must be nonnegative");
    }
    let mut sq = 0.0;
    let mut lin = 0.0;
    for (nd, v) in grid.nodes().iter().zip(&f.values) {
        sq += nd.weight * v * v / nd.h;
        lin += nd.weight * v;
    }
    let lhs = grid.measure() * sq;
    let rhs = lin * lin / grid.dim() as f64;
    let margin = lhs - rhs;
    Ok(RayReport {
        lhs,
        rhs,
        margin,
        holds: margin >= -1e-10 * lhs.abs().max(rhs.abs()),
    })
}

/// `a‖A‖² + b|v|² - ab (tr A - ⟨w, v⟩)² / (a|w|² + bn)` for a symmetric `n x n` matrix `A`.
pub fn pointwise_matrix_inequality_check(a_mat: &[f64], v: &[f64], w: &[f64], a: f64, b: f64) -> Result<f64> {
    let n = v.len();
    ensure!(n > 0 && w.len() == n && a_mat.len() == n * n, InvalidInput, "shape mismatch");
    ensure!(a > 0.0 && b > 0.0, InvalidInput, "a and b must be positive");
    let tr = trace(a_mat, n) - dot(w, v);
    Ok(a * frobenius_sq(a_mat) + b * dot(v, v) - a * b * tr * tr / (a * dot(w, w) + b * n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{SmoothBody, SphereFn};
    use core::f64::consts::PI;

    fn disk(density: Density) -> BoundaryGrid {
        BoundaryGrid::new(&SmoothBody::ball(2, 1.0).unwrap(), density).unwrap()
    }

    #[test]
    fn disk_local_form_oracles() {
        let g = disk(Density::Lebesgue);
        let one = SphereFn::constant(1.0).sample(&g).unwrap();
        let c2 = SphereFn::cos(2).sample(&g).unwrap();
        assert!((local_form_value(&g, 1.0, 0.0, &one).unwrap() + 2.0 * PI).abs() < 1e-12);
        assert!((local_form_value(&g, 1.0, 0.0, &c2).unwrap() + 3.0 * PI).abs() < 1e-12);
        assert!(local_form_value(&g, 1.0, 1.0, &one).unwrap().abs() < 1e-12);
        assert!(local_form_value(&g, 0.5, 0.7, &one).is_err());
    }

    #[test]
    fn improved_form_oracles() {
        let g = disk(Density::Lebesgue);
        let one = SphereFn::constant(1.0).sample(&g).unwrap();
        let c2 = SphereFn::cos(2).sample(&g).unwrap();
        assert!(improved_form_value(&g, 1.0, &one).unwrap().abs() < 1e-12);
        assert!((improved_form_value(&g, 1.0, &c2).unwrap() + 3.0 * PI).abs() < 1e-12);
        assert!(improved_form_value(&g, 0.0, &one).unwrap().abs() < 1e-12);
        assert!(improved_form_value(&disk(Density::Gaussian), 1.0, &one).is_err());
    }

    #[test]
    fn disk_eigen_oracles() {
        let g = disk(Density::Lebesgue);
        let r = local_form_max(&g, 1.0, 0.0, &TestFunctionBasis::trig(8)).unwrap();
        assert!(r.max_eigenvalue <= 1e-8 && r.holds);
        let r = local_form_max(&g, 1.0, 1.0, &TestFunctionBasis::trig(8)).unwrap();
        assert!(r.max_eigenvalue.abs() <= r.tol);
        assert!((r.coefficients[0] - 1.0).abs() < 1e-6);
        assert!(r.coefficients[1..].iter().all(|c| c.abs() < 1e-6));
    }

    #[test]
    fn planar_log_case_on_ellipse() {
        let e = SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap();
        let g = BoundaryGrid::new(&e, Density::Lebesgue).unwrap();
        let r = local_form_max(&g, 0.0, 0.0, &TestFunctionBasis::trig(16)).unwrap();
        assert!(r.holds, "{} > {}", r.max_eigenvalue, r.tol);
    }

    #[test]
    fn degenerate_basis_detected() {
        let g = disk(Density::Lebesgue);
        let basis = TestFunctionBasis {
            functions: alloc::vec![SphereFn::cos(2), SphereFn::cos(2)],
        };
        assert!(matches!(
            local_form_max(&g, 1.0, 0.0, &basis),
            Err(crate::Error::DegenerateBasis(_))
        ));
    }

    #[test]
    fn bochner_disk_and_ellipse() {
        let u = QuadraticField::half_norm_sq(2);
        let r = bochner_residual(&disk(Density::Lebesgue), &u).unwrap();
        assert!((r.lhs - 4.0 * PI).abs() < 1e-10);
        assert!(r.relative() < 1e-10);
        let e = SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap();
        let g = BoundaryGrid::new(&e, Density::Gaussian).unwrap();
        for u in [QuadraticField::saddle(2), QuadraticField::cross(2)] {
            let r = bochner_residual(&g, &u).unwrap();
            assert!(r.relative() < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn divergence_identity() {
        let e = SmoothBody::smoothed_box(1.0, 0.6, 0.05, 0.05).unwrap();
        let g = BoundaryGrid::new(&e, Density::Gaussian).unwrap();
        let r = divergence_residual(&g, &QuadraticField::half_norm_sq(2)).unwrap();
        assert!(r.relative() < 1e-8, "{r:?}");
    }

    #[test]
    fn ray_decreasing_oracles() {
        let g = disk(Density::Lebesgue);
        let one = SphereFn::constant(1.0).sample(&g).unwrap();
        let r = ray_decreasing_check(&g, &one).unwrap();
        assert!((r.lhs - 2.0 * PI * PI).abs() < 1e-10 && (r.rhs - 2.0 * PI * PI).abs() < 1e-10);
        let r = ray_decreasing_check(&disk(Density::Gaussian), &one).unwrap();
        assert!(r.margin > 1e-3);
        let neg = SphereFn::constant(-1.0).sample(&g).unwrap();
        assert!(ray_decreasing_check(&g, &neg).is_err());
    }

    #[test]
    fn small_matrix_examples() {
        let m = pointwise_matrix_inequality_check(&[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0], 1.0, 1.0).unwrap();
        assert!(m.abs() < 1e-15);
        let m = pointwise_matrix_inequality_check(&[0.0; 4], &[1.0, 2.0], &[0.0, 0.0], 1.0, 3.0).unwrap();
        assert!((m - 15.0).abs() < 1e-14);
    }
}

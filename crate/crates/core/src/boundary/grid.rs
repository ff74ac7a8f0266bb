//! Boundary data of a smooth body pulled back to the sphere via the Gauss map.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::smooth::SmoothBody;
use crate::error::{bail, ensure, Result};
use crate::geom::{dot, MAX_DIM};
use crate::measures::Density;
use crate::quad::gauss_legendre;

/// Default node count on the circle.
pub const PLANAR_NODES: usize = 1024;
/// Default Gauss-Legendre order in `z` on the sphere (azimuth uses twice as many).
pub const SPHERE_LATITUDES: usize = 64;
const CONE_ORDER: usize = 48;

/// One boundary node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryNode {
    pub u: [f64; MAX_DIM],
    pub x: [f64; MAX_DIM],
    pub frame: [[f64; MAX_DIM]; 2],
    /// `D²h` in the frame (row-major 2x2; only `[0]` when n = 2).
    pub curv: [f64; 4],
    pub curv_inv: [f64; 4],
    pub det: f64,
    /// `⟨x, n_x⟩ = h(u)`.
    pub h: f64,
    /// `tr (D²h)^{-1} - ⟨∇V(x), u⟩`.
    pub mean_curv: f64,
    /// Quadrature weight on the sphere.
    pub du: f64,
    /// `e^{-V(x)} det D²h du`.
    pub weight: f64,
}

/// Discretized boundary of a smooth body under a density.
#[derive(Clone, Debug)]
pub struct BoundaryGrid {
    dim: usize,
    density: Density,
    nodes: Vec<BoundaryNode>,
    antipode: Vec<usize>,
    measure: f64,
}

fn sphere_nodes(n: usize, res: usize) -> Result<(Vec<[f64; 3]>, Vec<f64>, Vec<usize>)> {
    match n {
        2 => {
            ensure!(res >= 16 && res % 2 == 0, InvalidInput, "planar grid needs an even node count >= 16");
            let du = 2.0 * PI / res as f64;
            let dirs = (0..res)
                .map(|j| {
                    let t = j as f64 * du;
                    [t.cos(), t.sin(), 0.0]
                })
                .collect();
            let anti = (0..res).map(|j| (j + res / 2) % res).collect();
            Ok((dirs, alloc::vec![du; res], anti))
        }
        3 => {
            ensure!(res >= 4, InvalidInput, "sphere grid needs at least 4 latitudes");
            let (zs, wz) = gauss_legendre(res);
            let nphi = 2 * res;
            let dphi = 2.0 * PI / nphi as f64;
            let mut dirs = Vec::with_capacity(res * nphi);
            let mut w = Vec::with_capacity(res * nphi);
            let mut anti = Vec::with_capacity(res * nphi);
            for (i, (z, wi)) in zs.iter().zip(&wz).enumerate() {
                let s = (1.0 - z * z).sqrt();
                for j in 0..nphi {
                    let phi = (j as f64 + 0.5) * dphi;
                    dirs.push([s * phi.cos(), s * phi.sin(), *z]);
                    w.push(wi * dphi);
                    anti.push((res - 1 - i) * nphi + (j + nphi / 2) % nphi);
                }
            }
            Ok((dirs, w, anti))
        }
        _ => bail!(Unsupported, "smooth boundary analysis is implemented for n = 2, 3 only"),
    }
}

impl BoundaryGrid {
    pub fn new(body: &SmoothBody, density: Density) -> Result<Self> {
        let res = if body.dim() == 2 { PLANAR_NODES } else { SPHERE_LATITUDES };
        Self::with_resolution(body, density, res)
    }

    /// `res` is the node count (n = 2) or the number of latitudes (n = 3).
    pub fn with_resolution(body: &SmoothBody, density: Density, res: usize) -> Result<Self> {
        let n = body.dim();
        let (dirs, du, antipode) = sphere_nodes(n, res)?;
        let m = n - 1;
        let cone = gauss_legendre(CONE_ORDER);
        let mut nodes = Vec::with_capacity(dirs.len());
        let mut measure = 0.0;
        let mut grad = [0.0; MAX_DIM];
        for (d, w) in dirs.iter().zip(&du) {
            let loc = body.local(&d[..n])?;
            ensure!(loc.h > 0.0, Domain, "support function not positive: origin not interior");
            let (det, inv) = if m == 1 {
                (loc.curv[0], [1.0 / loc.curv[0], 0.0, 0.0, 0.0])
            } else {
                let c = &loc.curv;
                let det = c[0] * c[3] - c[1] * c[2];
                (det, [c[3] / det, -c[1] / det, -c[2] / det, c[0] / det])
            };
            let pd = if m == 1 { det > 0.0 } else { det > 0.0 && loc.curv[0] > 0.0 };
            ensure!(pd, Domain, "curvature matrix not positive definite: body is not C^{{2,+}}");
            density.grad_v(&loc.x[..n], &mut grad[..n]);
            let tr_inv = if m == 1 { inv[0] } else { inv[0] + inv[3] };
            let mean_curv = tr_inv - dot(&grad[..n], &d[..n]);
            let weight = density.weight(&loc.x[..n]) * det * w;
            // cone over the boundary: dx = t^{n-1} h det D²h dt du
            let mut pt = [0.0; MAX_DIM];
            let radial = crate::quad::gauss_legendre_on(&cone, 0.0, 1.0, |t| {
                for i in 0..n {
                    pt[i] = t * loc.x[i];
                }
                t.powi(n as i32 - 1) * density.weight(&pt[..n])
            });
            measure += w * loc.h * det * radial;
            let mut u = [0.0; MAX_DIM];
            u[..n].copy_from_slice(&d[..n]);
            nodes.push(BoundaryNode {
                u,
                x: loc.x,
                frame: loc.frame,
                curv: loc.curv,
                curv_inv: inv,
                det,
                h: loc.h,
                mean_curv,
                du: *w,
                weight,
            });
        }
        Ok(BoundaryGrid {
            dim: n,
            density,
            nodes,
            antipode,
            measure,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn density(&self) -> Density {
        self.density
    }

    pub fn nodes(&self) -> &[BoundaryNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    /// μ(K) by quadrature over the cone parametrization of the grid.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// `∫_{∂K} 1 dμ_{∂K}`.
    pub fn surface(&self) -> f64 {
        self.nodes.iter().map(|nd| nd.weight).sum()
    }

    /// Smallest `⟨x, n_x⟩` on the grid.
    pub fn min_support(&self) -> f64 {
        self.nodes.iter().map(|nd| nd.h).fold(f64::INFINITY, f64::min)
    }
}

/// A function on the sphere with its tangential gradient (frame coordinates).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn {
    pub values: Vec<f64>,
    pub grads: Vec<[f64; 2]>,
}

impl GridFn {
    /// `self + t * other`.
    pub fn add_scaled(&self, other: &GridFn, t: f64) -> GridFn {
        GridFn {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + t * b).collect(),
            grads: self
                .grads
                .iter()
                .zip(&other.grads)
                .map(|(a, b)| [a[0] + t * b[0], a[1] + t * b[1]])
                .collect(),
        }
    }

    fn check_even(&self, grid: &BoundaryGrid) -> Result<()> {
        ensure!(self.values.len() == grid.len(), InvalidInput, "function does not match the grid");
        let scale = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
        for (i, v) in self.values.iter().enumerate() {
            ensure!(
                (v - self.values[grid.antipode(i)]).abs() <= 1e-10 * scale,
                InvalidInput,
                "test function is not even"
            );
            ensure!(v.is_finite(), InvalidInput, "test function is not finite");
        }
        Ok(())
    }
}

/// Analytic even functions on the sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum SphereFn {
    /// n = 2: `c0 + Σ_k cos[k-1] cos kθ + sin[k-1] sin kθ`.
    Trig { c0: f64, cos: Vec<f64>, sin: Vec<f64> },
    /// Restriction of `Σ c x^α` to the sphere (`α` padded to three exponents).
    Poly(Vec<(f64, [u32; 3])>),
    /// The support function `⟨x, n_x⟩` of the grid's body.
    Support,
}

impl SphereFn {
    pub fn constant(c: f64) -> Self {
        SphereFn::Poly(alloc::vec![(c, [0, 0, 0])])
    }

    /// `cos kθ` (n = 2).
    pub fn cos(k: usize) -> Self {
        let mut c = alloc::vec![0.0; k];
        c[k - 1] = 1.0;
        SphereFn::Trig {
            c0: 0.0,
            sin: alloc::vec![0.0; k],
            cos: c,
        }
    }

    /// `sin kθ` (n = 2).
    pub fn sin(k: usize) -> Self {
        let mut s = alloc::vec![0.0; k];
        s[k - 1] = 1.0;
        SphereFn::Trig {
            c0: 0.0,
            cos: alloc::vec![0.0; k],
            sin: s,
        }
    }

    /// Values and tangential gradients at the grid nodes; rejects odd functions.
    pub fn sample(&self, grid: &BoundaryGrid) -> Result<GridFn> {
        let n = grid.dim();
        let mut values = Vec::with_capacity(grid.len());
        let mut grads = Vec::with_capacity(grid.len());
        match self {
            SphereFn::Trig { c0, cos, sin } => {
                ensure!(n == 2, InvalidInput, "trigonometric test functions need n = 2");
                ensure!(cos.len() == sin.len(), InvalidInput, "cos/sin coefficient lengths differ");
                for nd in grid.nodes() {
                    let t = nd.u[1].atan2(nd.u[0]);
                    let (mut g, mut dg) = (*c0, 0.0);
                    for (i, (a, b)) in cos.iter().zip(sin).enumerate() {
                        let k = (i + 1) as f64;
                        let (s, c) = (k * t).sin_cos();
                        g += a * c + b * s;
                        dg += k * (b * c - a * s);
                    }
                    values.push(g);
                    grads.push([dg, 0.0]);
                }
            }
            SphereFn::Poly(terms) => {
                for (_, a) in terms {
                    ensure!(
                        a.iter().sum::<u32>() % 2 == 0,
                        InvalidInput,
                        "odd monomial in test function"
                    );
                    ensure!(n == 3 || a[2] == 0, InvalidInput, "monomial uses a missing coordinate");
                }
                for nd in grid.nodes() {
                    let mut g = 0.0;
                    let mut eg = [0.0; 3];
                    for (c, a) in terms {
                        let mut v = *c;
                        for i in 0..n {
                            v *= nd.u[i].powi(a[i] as i32);
                        }
                        g += v;
                        for (k, e) in eg.iter_mut().enumerate().take(n) {
                            if a[k] == 0 {
                                continue;
                            }
                            let mut d = c * a[k] as f64;
                            for i in 0..n {
                                let p = if i == k { a[i] - 1 } else { a[i] };
                                d *= nd.u[i].powi(p as i32);
                            }
                            *e += d;
                        }
                    }
                    values.push(g);
                    grads.push([dot(&nd.frame[0][..n], &eg[..n]), dot(&nd.frame[1][..n], &eg[..n])]);
                }
            }
            SphereFn::Support => {
                for nd in grid.nodes() {
                    values.push(nd.h);
                    grads.push([dot(&nd.frame[0][..n], &nd.x[..n]), dot(&nd.frame[1][..n], &nd.x[..n])]);
                }
            }
        }
        let f = GridFn { values, grads };
        f.check_even(grid)?;
        Ok(f)
    }
}

/// Finite even basis of test functions.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunctionBasis {
    pub functions: Vec<SphereFn>,
}

/// Default trigonometric cutoff in the plane.
pub const DEFAULT_K_MAX: usize = 16;
/// Default polynomial degree on the 2-sphere.
pub const DEFAULT_DEGREE: u32 = 8;

impl TestFunctionBasis {
    /// `{1, cos 2kθ, sin 2kθ : k <= k_max}`.
    pub fn trig(k_max: usize) -> Self {
        let mut functions = alloc::vec![SphereFn::constant(1.0)];
        for k in 1..=k_max {
            functions.push(SphereFn::cos(2 * k));
            functions.push(SphereFn::sin(2 * k));
        }
        TestFunctionBasis { functions }
    }

    /// Monomials of the largest even degree `<= degree` in three variables;
    /// on the sphere they span every even harmonic of degree `<= degree`.
    pub fn even_polynomials(degree: u32) -> Self {
        let d = degree - degree % 2;
        let mut functions = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                functions.push(SphereFn::Poly(alloc::vec![(1.0, [a, b, d - a - b])]));
            }
        }
        TestFunctionBasis { functions }
    }

    pub fn default_for(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Self::trig(DEFAULT_K_MAX)),
            3 => Ok(Self::even_polynomials(DEFAULT_DEGREE)),
            _ => bail!(Unsupported, "no default test basis for n = {dim}"),
        }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn sample(&self, grid: &BoundaryGrid) -> Result<Vec<GridFn>> {
        self.functions.iter().map(|f| f.sample(grid)).collect()
    }
}

//! C^{2,+} symmetric bodies described by their support functions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{bail, ensure, Result};
use crate::geom::{check_dim, MAX_DIM};

/// Tangent frame plus boundary data at one direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalData {
    pub h: f64,
    /// Boundary point `∇h(u)`.
    pub x: [f64; MAX_DIM],
    /// Orthonormal tangent vectors (rows), `n - 1` of them.
    pub frame: [[f64; MAX_DIM]; 2],
    /// Curvature matrix `D²h = ∇²_S h + h Id` in the frame, row-major 2x2
    /// (only the `[0]` entry is used when n = 2).
    pub curv: [f64; 4],
}

/// A smooth symmetric convex body.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothBody {
    /// Ellipsoid (a ball when all axes agree), n = 2 or 3.
    Ellipsoid { axes: Vec<f64> },
    /// Planar body with `h(θ) = c0 + Σ_k cos[k-1] cos kθ + sin[k-1] sin kθ`.
    Trig { c0: f64, cos: Vec<f64>, sin: Vec<f64> },
}

/// Kernel width used by [`SmoothBody::smoothed_box`] when none is given.
pub const DEFAULT_BOX_KERNEL: f64 = 0.05;
/// Ball radius added by [`SmoothBody::smoothed_box`] when none is given.
pub const DEFAULT_BOX_EPS: f64 = 0.05;

impl SmoothBody {
    pub fn ball(dim: usize, r: f64) -> Result<Self> {
        Self::ellipsoid(&alloc::vec![r; dim])
    }

    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        check_dim(axes.len())?;
        ensure!(
            axes.len() <= 3,
            Unsupported,
            "smooth boundary analysis is implemented for n = 2, 3 only"
        );
        ensure!(
            axes.iter().all(|a| a.is_finite() && *a > 0.0),
            InvalidInput,
            "semi-axes must be positive"
        );
        Ok(SmoothBody::Ellipsoid { axes: axes.to_vec() })
    }

    /// Planar trigonometric support function; odd frequencies must vanish and
    /// the curvature `h'' + h` must stay positive.
    pub fn trig(c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        ensure!(cos.len() == sin.len(), InvalidInput, "cos/sin coefficient lengths differ");
        for k in (1..=cos.len()).filter(|k| k % 2 == 1) {
            ensure!(
                cos[k - 1] == 0.0 && sin[k - 1] == 0.0,
                InvalidInput,
                "odd frequency {k} present: the body would not be symmetric"
            );
        }
        let b = SmoothBody::Trig { c0, cos, sin };
        for j in 0..4096 {
            let t = 2.0 * PI * j as f64 / 4096.0;
            let (h, _, d2) = b.trig_eval(t);
            ensure!(h > 0.0, Domain, "support function not positive at θ = {t}");
            ensure!(h + d2 > 0.0, Domain, "h'' + h not positive at θ = {t}: body is not C^{{2,+}}");
        }
        Ok(b)
    }

    /// Fits a trigonometric body to `values` at equally spaced angles.
    pub fn from_samples(values: &[f64], max_freq: usize) -> Result<Self> {
        let m = values.len();
        ensure!(m >= 2 * max_freq + 1, InvalidInput, "need more samples than 2*max_freq");
        let mut cos = alloc::vec![0.0; max_freq];
        let mut sin = alloc::vec![0.0; max_freq];
        let c0 = values.iter().sum::<f64>() / m as f64;
        for k in (2..=max_freq).step_by(2) {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let t = 2.0 * PI * j as f64 / m as f64;
                a += v * (k as f64 * t).cos();
                b += v * (k as f64 * t).sin();
            }
            cos[k - 1] = 2.0 * a / m as f64;
            sin[k - 1] = 2.0 * b / m as f64;
        }
        Self::trig(c0, cos, sin)
    }

    /// Box `[-a, a] x [-b, b]` averaged over rotations with a Gaussian kernel
    /// of width `kernel` (radians), plus `eps` times the unit disk.
    pub fn smoothed_box(a: f64, b: f64, eps: f64, kernel: f64) -> Result<Self> {
        ensure!(a > 0.0 && b > 0.0, InvalidInput, "box half-widths must be positive");
        ensure!(eps > 0.0, InvalidInput, "smoothing radius must be positive");
        ensure!(kernel > 0.0, InvalidInput, "kernel width must be positive");
        let c0 = 2.0 * (a + b) / PI + eps;
        let mut cos = Vec::new();
        let mut k = 1usize;
        loop {
            let kf = k as f64;
            let damp = (-2.0 * kf * kf * kernel * kernel).exp();
            let base = 4.0 / (PI * (4.0 * kf * kf - 1.0));
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let coef = damp * base * (sign * a - b);
            if damp * base * (a + b) < 1e-17 {
                break;
            }
            cos.resize(2 * k, 0.0);
            cos[2 * k - 1] = coef;
            k += 1;
        }
        let sin = alloc::vec![0.0; cos.len()];
        Self::trig(c0, cos, sin)
    }

    pub fn dim(&self) -> usize {
        match self {
            SmoothBody::Ellipsoid { axes } => axes.len(),
            SmoothBody::Trig { .. } => 2,
        }
    }

    fn trig_eval(&self, t: f64) -> (f64, f64, f64) {
        let SmoothBody::Trig { c0, cos, sin } = self else {
            return (0.0, 0.0, 0.0);
        };
        let (mut h, mut d1, mut d2) = (*c0, 0.0, 0.0);
        for (i, (a, b)) in cos.iter().zip(sin).enumerate() {
            if *a == 0.0 && *b == 0.0 {
                continue;
            }
            let k = (i + 1) as f64;
            let (s, c) = (k * t).sin_cos();
            h += a * c + b * s;
            d1 += k * (b * c - a * s);
            d2 -= k * k * (a * c + b * s);
        }
        (h, d1, d2)
    }

    /// Mean of `h` over the circle times 2π: the perimeter in the plane.
    pub fn trig_mean(&self) -> Option<f64> {
        match self {
            SmoothBody::Trig { c0, .. } => Some(*c0),
            _ => None,
        }
    }

    /// Boundary data at `u`, using the standard spherical frame when n = 3.
    pub fn local(&self, u: &[f64]) -> Result<LocalData> {
        let n = self.dim();
        ensure!(u.len() == n, InvalidInput, "direction of wrong dimension");
        let mut frame = [[0.0; MAX_DIM]; 2];
        if n == 2 {
            frame[0][0] = -u[1];
            frame[0][1] = u[0];
        } else {
            let z = u[2].clamp(-1.0, 1.0);
            let s = (1.0 - z * z).sqrt();
            ensure!(s > 1e-12, InvalidInput, "spherical frame is singular at the poles");
            let (cp, sp) = (u[0] / s, u[1] / s);
            frame[0][..3].copy_from_slice(&[z * cp, z * sp, -s]);
            frame[1][..3].copy_from_slice(&[-sp, cp, 0.0]);
        }
        match self {
            SmoothBody::Trig { .. } => {
                let t = u[1].atan2(u[0]);
                let (h, d1, d2) = self.trig_eval(t);
                let mut x = [0.0; MAX_DIM];
                x[0] = h * u[0] + d1 * frame[0][0];
                x[1] = h * u[1] + d1 * frame[0][1];
                Ok(LocalData {
                    h,
                    x,
                    frame,
                    curv: [h + d2, 0.0, 0.0, 0.0],
                })
            }
            SmoothBody::Ellipsoid { axes } => {
                let a2: Vec<f64> = axes.iter().map(|a| a * a).collect();
                let h = (0..n).map(|i| a2[i] * u[i] * u[i]).sum::<f64>().sqrt();
                let mut x = [0.0; MAX_DIM];
                for i in 0..n {
                    x[i] = a2[i] * u[i] / h;
                }
                // Hessian of the homogeneous extension at u: (A² - x xᵀ) / h
                let hess = |i: usize, j: usize| {
                    let d = if i == j { a2[i] } else { 0.0 };
                    (d - x[i] * x[j]) / h
                };
                let m = n - 1;
                let mut curv = [0.0; 4];
                for a in 0..m {
                    for b in 0..m {
                        let mut s = 0.0;
                        for i in 0..n {
                            for j in 0..n {
                                s += frame[a][i] * hess(i, j) * frame[b][j];
                            }
                        }
                        curv[a * 2 + b] = s;
                    }
                }
                Ok(LocalData { h, x, frame, curv })
            }
        }
    }

    /// Exact perimeter (n = 2) or surface area (n = 3) for the ball, and
    /// 1D-quadrature values for planar bodies; used as oracles in tests.
    pub fn reference_surface(&self) -> Result<f64> {
        match self {
            SmoothBody::Trig { c0, .. } => Ok(2.0 * PI * c0),
            SmoothBody::Ellipsoid { axes } if axes.len() == 2 => {
                let (a, b) = (axes[0], axes[1]);
                let r = crate::quad::integrate(
                    |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt(),
                    0.0,
                    2.0 * PI,
                    1e-14,
                    1e-14,
                );
                Ok(r.value)
            }
            SmoothBody::Ellipsoid { axes } if axes.iter().all(|a| *a == axes[0]) => Ok(4.0 * PI * axes[0] * axes[0]),
            _ => bail!(Unsupported, "no reference surface area for this body"),
        }
    }
}


use num_traits::Float;

use crate::error::{ensure, Result};
use crate::geom::norm_sq;

/// Even log-concave density `e^{-V}` on R^n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Density {
    /// `V = 0`.
    Lebesgue,
    /// Standard Gaussian, `V = |x|^2 / 2 + (n/2) log 2π`.
    Gaussian,
    /// `V = |x|^α / α` with `α >= 2`.
    Power { alpha: f64 },
}

const LOG_TWO_PI: f64 = 1.837_877_066_409_345_5;

impl Density {
    pub fn power(alpha: f64) -> Result<Self> {
        ensure!(
            alpha.is_finite() && alpha >= 2.0,
            InvalidInput,
            "power density needs alpha >= 2 (C^2 potential), got {alpha}"
        );
        Ok(Density::Power { alpha })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Density::Lebesgue => "lebesgue",
            Density::Gaussian => "gaussian",
            Density::Power { .. } => "power",
        }
    }

    /// `V` as a function of `t = |x|` in dimension `n`.
    pub fn v_radial(&self, t: f64, n: usize) -> f64 {
        match self {
            Density::Lebesgue => 0.0,
            Density::Gaussian => 0.5 * t * t + 0.5 * n as f64 * LOG_TWO_PI,
            Density::Power { alpha } => t.powf(*alpha) / alpha,
        }
    }

    pub fn v(&self, x: &[f64]) -> f64 {
        match self {
            Density::Lebesgue => 0.0,
            Density::Gaussian => 0.5 * norm_sq(x) + 0.5 * x.len() as f64 * LOG_TWO_PI,
            Density::Power { alpha } => norm_sq(x).powf(0.5 * alpha) / alpha,
        }
    }

    /// `e^{-V(x)}`.
    pub fn weight(&self, x: &[f64]) -> f64 {
        (-self.v(x)).exp()
    }

    /// `e^{-V}` at radius `t`.
    pub fn weight_radial(&self, t: f64, n: usize) -> f64 {
        (-self.v_radial(t, n)).exp()
    }

    pub fn grad_v(&self, x: &[f64], out: &mut [f64]) {
        let s = match self {
            Density::Lebesgue => 0.0,
            Density::Gaussian => 1.0,
            Density::Power { alpha } => norm_sq(x).powf(0.5 * (alpha - 2.0)),
        };
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
    }

    /// Row-major `n x n` Hessian of `V`.
    pub fn hess_v(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        out[..n * n].fill(0.0);
        match self {
            Density::Lebesgue => {}
            Density::Gaussian => {
                for i in 0..n {
                    out[i * n + i] = 1.0;
                }
            }
            Density::Power { alpha } => {
                let r2 = norm_sq(x);
                if r2 == 0.0 {
                    if *alpha == 2.0 {
                        for i in 0..n {
                            out[i * n + i] = 1.0;
                        }
                    }
                    return;
                }
                let s = r2.powf(0.5 * (alpha - 2.0));
                for i in 0..n {
                    for j in 0..n {
                        let d = if i == j { 1.0 } else { 0.0 };
                        out[i * n + j] = s * (d + (alpha - 2.0) * x[i] * x[j] / r2);
                    }
                }
            }
        }
    }

    pub fn laplacian_v(&self, x: &[f64]) -> f64 {
        let n = x.len() as f64;
        match self {
            Density::Lebesgue => 0.0,
            Density::Gaussian => n,
            Density::Power { alpha } => norm_sq(x).powf(0.5 * (alpha - 2.0)) * (n + alpha - 2.0),
        }
    }

    /// Uniform convexity constant: `∇²V >= k1 Id` everywhere.
    pub fn k1(&self) -> f64 {
        match self {
            Density::Lebesgue => 0.0,
            Density::Gaussian => 1.0,
            Density::Power { alpha } => {
                if *alpha == 2.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius beyond which `e^{-V}` is below `e^{-745}`, i.e. zero in f64.
    pub(crate) fn negligible_radius(&self) -> f64 {
        match self {
            Density::Lebesgue => f64::INFINITY,
            Density::Gaussian => 38.7,
            Density::Power { alpha } => (745.0 * alpha).powf(1.0 / alpha),
        }
    }
}

//! Small fixed-capacity vectors for the ambient space R^n, 2 <= n <= 6.

use core::ops::Deref;

use num_traits::Float;

use crate::error::{ensure, Result};

/// Largest ambient dimension handled by the toolkit.
pub const MAX_DIM: usize = 6;
/// Smallest ambient dimension handled by the toolkit.
pub const MIN_DIM: usize = 2;

/// Tolerance on the Euclidean norm of a [`Direction`].
pub const UNIT_TOL: f64 = 1e-12;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    ensure!(
        (MIN_DIM..=MAX_DIM).contains(&dim),
        InvalidInput,
        "dimension {dim} outside [{MIN_DIM}, {MAX_DIM}]"
    );
    Ok(())
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// A unit vector u on S^{n-1}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    coords: [f64; MAX_DIM],
    dim: usize,
}

impl Direction {
    /// Wraps an already-unit vector; rejects vectors whose norm is off by more
    /// than [`UNIT_TOL`].
    pub fn new(v: &[f64]) -> Result<Self> {
        check_dim(v.len())?;
        let nrm = norm(v);
        ensure!(
            (nrm - 1.0).abs() <= UNIT_TOL,
            InvalidInput,
            "direction is not unit (norm {nrm})"
        );
        Ok(Self::from_slice_unchecked(v))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(v: &[f64]) -> Result<Self> {
        check_dim(v.len())?;
        let nrm = norm(v);
        ensure!(
            nrm.is_finite() && nrm > 0.0,
            InvalidInput,
            "cannot normalize a zero or non-finite vector"
        );
        let mut coords = [0.0; MAX_DIM];
        for (c, x) in coords.iter_mut().zip(v) {
            *c = x / nrm;
        }
        Ok(Self {
            coords,
            dim: v.len(),
        })
    }

    pub(crate) fn from_slice_unchecked(v: &[f64]) -> Self {
        let mut coords = [0.0; MAX_DIM];
        coords[..v.len()].copy_from_slice(v);
        Self {
            coords,
            dim: v.len(),
        }
    }

    /// Planar direction (cos θ, sin θ).
    pub fn from_angle(theta: f64) -> Self {
        Self::from_slice_unchecked(&[theta.cos(), theta.sin()])
    }

    /// ±e_i in R^dim.
    pub fn axis(dim: usize, i: usize, positive: bool) -> Self {
        let mut coords = [0.0; MAX_DIM];
        coords[i] = if positive { 1.0 } else { -1.0 };
        Self { coords, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    pub fn negated(&self) -> Self {
        let mut out = *self;
        for c in out.coords[..self.dim].iter_mut() {
            *c = -*c;
        }
        out
    }

    /// Polar angle in (-π, π]; only meaningful for n = 2.
    pub fn angle(&self) -> f64 {
        self.coords[1].atan2(self.coords[0])
    }
}

impl Deref for Direction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        self.as_slice()
    }
}

/// Dense symmetric matrix helpers on row-major `n*n` slices.
pub(crate) fn frobenius_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

pub(crate) fn trace(a: &[f64], n: usize) -> f64 {
    (0..n).map(|i| a[i * n + i]).sum()
}

//! Shared evaluation grids on the sphere and grid-sampled support functions.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use num_traits::Float;

use super::hpoly::HPolytope;
use crate::error::{ensure, Result};
use crate::geom::{check_dim, Direction};

/// Angles used on the circle.
pub const PLANAR_GRID: usize = 720;
/// Base points on S^2 and above (antipodes are added on top).
pub const SPHERE_GRID_BASE: usize = 2048;
const HIGH_DIM_SEED: u64 = 0x5eed_0f_5fe7e;

/// Deterministic direction set used for every grid operation in dimension `dim`.
///
/// n = 2: equally spaced angles; n = 3: a Fibonacci lattice with antipodes;
/// n >= 4: normalized Gaussian vectors from a fixed-seed stream with
/// antipodes. The coordinate axes are always included.
pub fn eval_grid(dim: usize) -> Result<Arc<Vec<Direction>>> {
    check_dim(dim)?;
    let mut out = Vec::new();
    if dim == 2 {
        let half = PLANAR_GRID / 2;
        for j in 0..half {
            out.push(Direction::from_angle(2.0 * PI * j as f64 / PLANAR_GRID as f64));
        }
        out[0] = Direction::axis(2, 0, true);
        out[half / 2] = Direction::axis(2, 1, true);
        for j in 0..half {
            let d = out[j].negated();
            out.push(d);
        }
        return Ok(Arc::new(out));
    }
    let n = SPHERE_GRID_BASE;
    if dim == 3 {
        let golden = PI * (3.0 - 5f64.sqrt());
        for i in 0..n {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            let d = Direction::normalized(&[r * phi.cos(), r * phi.sin(), z])?;
            out.push(d);
            out.push(d.negated());
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(HIGH_DIM_SEED);
        let mut v = [0.0; 6];
        while out.len() < 2 * n {
            for c in v.iter_mut().take(dim) {
                *c = StandardNormal.sample(&mut rng);
            }
            if let Ok(d) = Direction::normalized(&v[..dim]) {
                out.push(d);
                out.push(d.negated());
            }
        }
    }
    for i in 0..dim {
        out.push(Direction::axis(dim, i, true));
        out.push(Direction::axis(dim, i, false));
    }
    Ok(Arc::new(out))
}

/// A positive function known at finitely many directions.
///
/// Off the grid it is evaluated as the support function of its Wulff shape,
/// so every evaluation is a genuine support function.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    dirs: Arc<Vec<Direction>>,
    values: Vec<f64>,
    wulff: HPolytope,
}

impl GridFunction {
    pub fn new(dirs: Arc<Vec<Direction>>, values: Vec<f64>) -> Result<Self> {
        ensure!(dirs.len() == values.len(), InvalidInput, "grid and value lengths differ");
        ensure!(!dirs.is_empty(), InvalidInput, "empty direction grid");
        for v in &values {
            ensure!(v.is_finite() && *v > 0.0, Domain, "grid values must be positive, got {v}");
        }
        let wulff = HPolytope::new(dirs.to_vec(), values.clone())?;
        Ok(Self { dirs, values, wulff })
    }

    /// Samples `f` on the default evaluation grid.
    pub fn sample<F: Fn(&Direction) -> f64>(dim: usize, f: F) -> Result<Self> {
        let dirs = eval_grid(dim)?;
        let values = dirs.iter().map(&f).collect();
        Self::new(dirs, values)
    }

    pub fn dim(&self) -> usize {
        self.wulff.dim()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.dirs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Node value on grid directions, Wulff support elsewhere.
    pub fn eval(&self, u: &Direction) -> f64 {
        match self.dirs.iter().position(|d| d == u) {
            Some(i) => self.values[i],
            None => self.wulff.support_vec(u).unwrap_or(f64::NAN),
        }
    }

    pub fn wulff_polytope(&self) -> &HPolytope {
        &self.wulff
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_symmetric_and_unit() {
        for dim in 2..=5 {
            let g = eval_grid(dim).unwrap();
            for d in g.iter() {
                assert!((crate::geom::norm(d) - 1.0).abs() < 1e-12);
                assert!(g.iter().any(|e| *e == d.negated()));
            }
        }
        assert_eq!(eval_grid(2).unwrap().len(), 720);
        assert_eq!(eval_grid(3).unwrap().len(), 4096 + 6);
    }
}

//! Symmetric convex bodies, support-function algebra and L_p combinations.

mod family;
mod grid;
mod hpoly;
mod lp;
mod polygon;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use family::Family;
pub use grid::{eval_grid, GridFunction, PLANAR_GRID, SPHERE_GRID_BASE};
pub use hpoly::{HPolytope, MAX_ENUM_FACETS_3D, MAX_LP_REDUCTION};
pub(crate) use hpoly::enumerate3 as enumerate_facets3;
pub use lp::{support_lp, LpSolution};
pub use polygon::Polygon;

use num_traits::Float;

use crate::error::{bail, ensure, Result};
use crate::geom::{check_dim, dot, norm, Direction, UNIT_TOL};

/// Geometric representation of a [`Body`].
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Family(Family),
    Polytope(HPolytope),
    /// `base + shift`; only produced for the non-symmetric counterexample.
    Translated { base: Box<Body>, shift: Vec<f64> },
}

/// A convex body with cached radii and bounding box.
#[derive(Clone, Debug, PartialEq)]
pub struct Body {
    shape: Shape,
    inradius: f64,
    circumradius: f64,
    extents: Vec<f64>,
}

impl Body {
    pub fn from_family(f: Family) -> Result<Self> {
        f.validate()?;
        Ok(Self {
            inradius: f.inradius(),
            circumradius: f.circumradius(),
            extents: f.extents(),
            shape: Shape::Family(f),
        })
    }

    pub fn ball(dim: usize, r: f64) -> Result<Self> {
        Self::from_family(Family::ball(dim, r)?)
    }

    pub fn cube(half: &[f64]) -> Result<Self> {
        Self::from_family(Family::cube(half)?)
    }

    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        Self::from_family(Family::ellipsoid(axes)?)
    }

    pub fn polytope(normals: Vec<Direction>, heights: Vec<f64>) -> Result<Self> {
        Self::from_polytope(HPolytope::new(normals, heights)?)
    }

    pub fn from_polytope(p: HPolytope) -> Result<Self> {
        Ok(Self {
            inradius: p.inradius(),
            circumradius: p.circumradius(),
            extents: p.extents(),
            shape: Shape::Polytope(p),
        })
    }

    /// `base + shift`. Radii refer to balls centred at the translation point.
    pub fn translated(base: Body, shift: &[f64]) -> Result<Self> {
        ensure!(shift.len() == base.dim(), InvalidInput, "shift has wrong dimension");
        ensure!(shift.iter().all(|s| s.is_finite()), InvalidInput, "shift must be finite");
        if shift.iter().all(|s| *s == 0.0) {
            return Ok(base);
        }
        let (base, shift) = match base.shape {
            Shape::Translated { base: b, shift: s } => (*b, s.iter().zip(shift).map(|(a, b)| a + b).collect()),
            _ => (base, shift.to_vec()),
        };
        let extents = base.extents.iter().zip(&shift).map(|(e, s)| e + s.abs()).collect();
        Ok(Self {
            inradius: base.inradius,
            circumradius: base.circumradius + norm(&shift),
            extents,
            shape: Shape::Translated {
                base: Box::new(base),
                shift,
            },
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Family(f) => f.dim(),
            Shape::Polytope(p) => p.dim(),
            Shape::Translated { base, .. } => base.dim(),
        }
    }

    /// Largest `r` with `r B` inside the body (for translated bodies, around
    /// the translation point).
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Half-widths of an origin-centred box containing the body.
    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.shape {
            Shape::Family(_) => true,
            Shape::Polytope(p) => p.is_symmetric(),
            Shape::Translated { .. } => false,
        }
    }

    pub fn translation(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Translated { shift, .. } => Some(shift),
            _ => None,
        }
    }

    /// Support value at an arbitrary vector (1-homogeneous extension).
    pub fn support_vec(&self, u: &[f64]) -> f64 {
        match &self.shape {
            Shape::Family(f) => f.support_vec(u),
            Shape::Polytope(p) => p.support_vec(u).unwrap_or(f64::NAN),
            Shape::Translated { base, shift } => base.support_vec(u) + dot(shift, u),
        }
    }

    pub fn support(&self, u: &Direction) -> f64 {
        self.support_vec(u)
    }

    /// Support value at a raw slice, which must be a unit vector.
    pub fn support_checked(&self, u: &[f64]) -> Result<f64> {
        ensure!(u.len() == self.dim(), InvalidInput, "direction has dimension {} not {}", u.len(), self.dim());
        let nrm = norm(u);
        ensure!((nrm - 1.0).abs() <= UNIT_TOL, InvalidInput, "direction is not unit (norm {nrm})");
        Ok(self.support_vec(u))
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Family(f) => f.contains_point(x),
            Shape::Polytope(p) => p.contains_point(x),
            Shape::Translated { base, shift } => {
                let mut y = [0.0; crate::geom::MAX_DIM];
                for (i, (a, b)) in x.iter().zip(shift).enumerate() {
                    y[i] = a - b;
                }
                base.contains_point(&y[..x.len()])
            }
        }
    }

    /// Distance from the centre (origin, or the translation point) to the
    /// boundary in direction `x`.
    pub fn radial(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Family(f) => norm(x) / f.gauge(x),
            Shape::Polytope(p) => p.radial(x),
            Shape::Translated { base, .. } => base.radial(x),
        }
    }

    /// Centre used by [`Body::radial`].
    pub fn centre(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Translated { shift, .. } => shift.clone(),
            _ => alloc::vec![0.0; self.dim()],
        }
    }

    /// Polar angles (about the centre) where the planar radial function kinks.
    pub fn kink_angles(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Family(f) => f.kink_angles(),
            Shape::Polytope(p) => p.kink_angles(),
            Shape::Translated { base, .. } => base.kink_angles(),
        }
    }

    /// Facet normals and heights for bodies that are polytopes.
    pub fn halfspaces(&self) -> Option<(Vec<Direction>, Vec<f64>)> {
        match &self.shape {
            Shape::Family(f) => f.as_halfspaces(),
            Shape::Polytope(p) => Some((p.normals().to_vec(), p.heights().to_vec())),
            Shape::Translated { .. } => None,
        }
    }

    /// The body as an H-polytope, if it is one.
    pub fn to_polytope(&self) -> Option<HPolytope> {
        match &self.shape {
            Shape::Polytope(p) => Some(p.clone()),
            _ => self.halfspaces().and_then(|(n, h)| HPolytope::new(n, h).ok()),
        }
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        match &self.shape {
            Shape::Family(f) => Self::from_family(f.scaled(t)?),
            Shape::Polytope(p) => Self::from_polytope(p.scaled(t)?),
            Shape::Translated { base, shift } => {
                let s: Vec<f64> = shift.iter().map(|x| x * t).collect();
                Self::translated(base.scaled(t)?, &s)
            }
        }
    }

    /// `t` with `other = t * self`, when detectable from the representation.
    pub fn dilate_ratio(&self, other: &Body) -> Option<f64> {
        match (&self.shape, &other.shape) {
            (Shape::Family(a), Shape::Family(b)) => a.dilate_ratio(b),
            (Shape::Polytope(a), Shape::Polytope(b)) if a.normals() == b.normals() => {
                let t = b.heights()[0] / a.heights()[0];
                a.heights()
                    .iter()
                    .zip(b.heights())
                    .all(|(x, y)| (y - t * x).abs() <= 1e-14 * y)
                    .then_some(t)
            }
            _ => None,
        }
    }

    /// Directions on which grid-level comparisons are made: the default grid
    /// plus any facet normals of the body.
    pub fn test_directions(&self) -> Result<Vec<Direction>> {
        let mut dirs = eval_grid(self.dim())?.to_vec();
        if let Some((n, _)) = self.halfspaces() {
            dirs.extend(n);
        }
        Ok(dirs)
    }
}

/// A support function: either exactly that of a known body, or values on a
/// direction grid evaluated by the Wulff-consistent rule.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportFunction {
    Exact(Body),
    Grid(GridFunction),
}

impl SupportFunction {
    pub fn dim(&self) -> usize {
        match self {
            SupportFunction::Exact(b) => b.dim(),
            SupportFunction::Grid(g) => g.dim(),
        }
    }

    pub fn eval(&self, u: &Direction) -> f64 {
        match self {
            SupportFunction::Exact(b) => b.support(u),
            SupportFunction::Grid(g) => g.eval(u),
        }
    }

    /// Values on the default evaluation grid.
    pub fn on_grid(&self) -> Result<Vec<f64>> {
        Ok(eval_grid(self.dim())?.iter().map(|u| self.eval(u)).collect())
    }
}

/// `(λ a^p + (1-λ) b^p)^{1/p}`, geometric mean at `p = 0`.
pub fn p_mean(a: f64, b: f64, lambda: f64, p: f64) -> f64 {
    if lambda == 1.0 {
        return a;
    }
    if lambda == 0.0 {
        return b;
    }
    if p == 1.0 {
        lambda * a + (1.0 - lambda) * b
    } else if p == 0.0 {
        (lambda * a.ln() + (1.0 - lambda) * b.ln()).exp()
    } else {
        // expm1/ln_1p keep full precision as p -> 0
        let s = lambda * (p * a.ln()).exp_m1() + (1.0 - lambda) * (p * b.ln()).exp_m1();
        (s.ln_1p() / p).exp()
    }
}

fn check_weights(lambda: f64, p: f64) -> Result<()> {
    ensure!((0.0..=1.0).contains(&lambda), InvalidInput, "lambda must lie in [0, 1], got {lambda}");
    ensure!((0.0..=1.0).contains(&p), InvalidInput, "p must lie in [0, 1], got {p}");
    Ok(())
}

/// The L_p combination `λ K +_p (1-λ) L`, as a support function.
///
/// Exact whenever the structure allows it (equal bodies, dilates, planar
/// polytopes at p = 1, translated bodies at p = 1); otherwise sampled on the
/// evaluation grid plus the facet normals of both bodies.
pub fn p_combine(k: &Body, l: &Body, lambda: f64, p: f64) -> Result<SupportFunction> {
    check_weights(lambda, p)?;
    ensure!(k.dim() == l.dim(), InvalidInput, "bodies live in different dimensions");
    if lambda == 1.0 || k == l {
        return Ok(SupportFunction::Exact(k.clone()));
    }
    if lambda == 0.0 {
        return Ok(SupportFunction::Exact(l.clone()));
    }
    if k.translation().is_some() || l.translation().is_some() {
        ensure!(
            p == 1.0,
            Domain,
            "translated bodies have nonpositive support values; only p = 1 is defined"
        );
        let strip = |b: &Body| match &b.shape {
            Shape::Translated { base, shift } => ((**base).clone(), shift.clone()),
            _ => (b.clone(), alloc::vec![0.0; b.dim()]),
        };
        let (kb, ks) = strip(k);
        let (lb, ls) = strip(l);
        let base = wulff(&p_combine(&kb, &lb, lambda, 1.0)?)?;
        let shift: Vec<f64> = ks.iter().zip(&ls).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        return Ok(SupportFunction::Exact(Body::translated(base, &shift)?));
    }
    if let Some(t) = k.dilate_ratio(l) {
        let factor = if p == 0.0 {
            t.powf(1.0 - lambda)
        } else {
            p_mean(1.0, t, lambda, p)
        };
        return Ok(SupportFunction::Exact(k.scaled(factor)?));
    }
    let (kh, lh) = (k.halfspaces(), l.halfspaces());
    if k.dim() == 2 && p == 1.0 {
        if let (Some((kn, _)), Some((ln, _))) = (&kh, &lh) {
            // a planar Minkowski combination only has facets along input normals
            let mut normals = kn.clone();
            for u in ln {
                if !normals.contains(u) {
                    normals.push(*u);
                }
            }
            let heights = normals
                .iter()
                .map(|u| lambda * k.support(u) + (1.0 - lambda) * l.support(u))
                .collect();
            return Ok(SupportFunction::Exact(Body::polytope(normals, heights)?));
        }
    }
    let mut dirs = eval_grid(k.dim())?.to_vec();
    for (n, _) in [kh, lh].into_iter().flatten() {
        for u in n {
            if !dirs.contains(&u) {
                dirs.push(u);
            }
        }
    }
    let mut values = Vec::with_capacity(dirs.len());
    for u in &dirs {
        let (a, b) = (k.support(u), l.support(u));
        if p < 1.0 && (a <= 0.0 || b <= 0.0) {
            bail!(Domain, "nonpositive support value with p = {p} < 1");
        }
        values.push(p_mean(a, b, lambda, p));
    }
    Ok(SupportFunction::Grid(GridFunction::new(Arc::new(dirs), values)?))
}

/// The Wulff shape `{x : <x, u> <= f(u)}` of a support function.
pub fn wulff(f: &SupportFunction) -> Result<Body> {
    match f {
        SupportFunction::Exact(b) => Ok(b.clone()),
        SupportFunction::Grid(g) => Body::from_polytope(g.wulff_polytope().clone()),
    }
}

/// Largest centred ball inside a symmetric body.
pub fn inradius(k: &Body) -> f64 {
    k.inradius()
}

/// Support dominance `h_K <= h_L + tol` on the test directions of both bodies.
pub fn contains(k: &Body, l: &Body) -> Result<bool> {
    ensure!(k.dim() == l.dim(), InvalidInput, "bodies live in different dimensions");
    check_dim(k.dim())?;
    let mut dirs = k.test_directions()?;
    if let Some((n, _)) = l.halfspaces() {
        dirs.extend(n);
    }
    let tol = 1e-9 * k.circumradius().max(l.circumradius());
    Ok(dirs.iter().all(|u| k.support(u) <= l.support(u) + tol))
}

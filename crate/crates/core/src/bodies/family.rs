//! Analytic families of origin-symmetric convex bodies.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{ensure, Result};
use crate::geom::{check_dim, norm, Direction};

/// A body with a closed-form support function.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Euclidean ball of radius `r`.
    Ball { dim: usize, r: f64 },
    /// Axis-parallel box `[-a_1, a_1] x ... x [-a_n, a_n]`.
    Box { half: Vec<f64> },
    /// `{ sum (x_i / a_i)^2 <= 1 }`.
    Ellipsoid { axes: Vec<f64> },
    /// `scale * B_q^n`, the ball of the l_q norm; `q` may be infinite.
    LqBall { dim: usize, q: f64, scale: f64 },
    /// `scale * B_1^n`.
    CrossPolytope { dim: usize, scale: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    ensure!(v.is_finite() && v > 0.0, InvalidInput, "{name} must be positive and finite, got {v}");
    Ok(())
}

/// Hölder conjugate of `q` in [1, inf].
fn conjugate(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    }
}

fn lq_norm(x: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        x.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else if q == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if q == 2.0 {
        norm(x)
    } else {
        let m = x.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * x.iter().map(|v| (v.abs() / m).powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

impl Family {
    pub fn ball(dim: usize, r: f64) -> Result<Self> {
        check_dim(dim)?;
        positive("radius", r)?;
        Ok(Family::Ball { dim, r })
    }

    pub fn cube(half: &[f64]) -> Result<Self> {
        check_dim(half.len())?;
        for &a in half {
            positive("box half-width", a)?;
        }
        Ok(Family::Box { half: half.to_vec() })
    }

    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        check_dim(axes.len())?;
        for &a in axes {
            positive("semi-axis", a)?;
        }
        Ok(Family::Ellipsoid { axes: axes.to_vec() })
    }

    pub fn lq_ball(dim: usize, q: f64, scale: f64) -> Result<Self> {
        check_dim(dim)?;
        positive("scale", scale)?;
        ensure!(q >= 1.0, InvalidInput, "l_q ball needs q >= 1, got {q}");
        Ok(Family::LqBall { dim, q, scale })
    }

    pub fn cross_polytope(dim: usize, scale: f64) -> Result<Self> {
        check_dim(dim)?;
        positive("scale", scale)?;
        Ok(Family::CrossPolytope { dim, scale })
    }

    pub fn dim(&self) -> usize {
        match self {
            Family::Ball { dim, .. } | Family::LqBall { dim, .. } | Family::CrossPolytope { dim, .. } => *dim,
            Family::Box { half } => half.len(),
            Family::Ellipsoid { axes } => axes.len(),
        }
    }

    /// Support function evaluated at an arbitrary vector (1-homogeneous).
    pub fn support_vec(&self, u: &[f64]) -> f64 {
        match self {
            Family::Ball { r, .. } => r * norm(u),
            Family::Box { half } => half.iter().zip(u).map(|(a, x)| a * x.abs()).sum(),
            Family::Ellipsoid { axes } => axes.iter().zip(u).map(|(a, x)| (a * x) * (a * x)).sum::<f64>().sqrt(),
            Family::LqBall { q, scale, .. } => scale * lq_norm(u, conjugate(*q)),
            Family::CrossPolytope { scale, .. } => scale * lq_norm(u, f64::INFINITY),
        }
    }

    pub fn support(&self, u: &Direction) -> f64 {
        self.support_vec(u)
    }

    /// Gauge (Minkowski functional) of the body at `x`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        match self {
            Family::Ball { r, .. } => norm(x) / r,
            Family::Box { half } => x.iter().zip(half).fold(0.0, |m, (v, a)| m.max(v.abs() / a)),
            Family::Ellipsoid { axes } => x.iter().zip(axes).map(|(v, a)| (v / a) * (v / a)).sum::<f64>().sqrt(),
            Family::LqBall { q, scale, .. } => lq_norm(x, *q) / scale,
            Family::CrossPolytope { scale, .. } => lq_norm(x, 1.0) / scale,
        }
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.gauge(x) <= 1.0
    }

    pub fn inradius(&self) -> f64 {
        let n = self.dim() as f64;
        match self {
            Family::Ball { r, .. } => *r,
            Family::Box { half } => half.iter().copied().fold(f64::INFINITY, f64::min),
            Family::Ellipsoid { axes } => axes.iter().copied().fold(f64::INFINITY, f64::min),
            Family::LqBall { q, scale, .. } => {
                let qs = conjugate(*q);
                let e = if qs.is_infinite() { -0.5 } else { 1.0 / qs - 0.5 };
                scale * n.powf(e).min(1.0)
            }
            Family::CrossPolytope { scale, .. } => scale / n.sqrt(),
        }
    }

    pub fn circumradius(&self) -> f64 {
        let n = self.dim() as f64;
        match self {
            Family::Ball { r, .. } => *r,
            Family::Box { half } => norm(half),
            Family::Ellipsoid { axes } => axes.iter().copied().fold(0.0, f64::max),
            Family::LqBall { q, scale, .. } => {
                let qs = conjugate(*q);
                let e = if qs.is_infinite() { -0.5 } else { 1.0 / qs - 0.5 };
                scale * n.powf(e).max(1.0)
            }
            Family::CrossPolytope { scale, .. } => *scale,
        }
    }

    /// Half-widths of the smallest axis-parallel box containing the body.
    pub fn extents(&self) -> Vec<f64> {
        match self {
            Family::Box { half } => half.clone(),
            Family::Ellipsoid { axes } => axes.clone(),
            Family::Ball { dim, r } => alloc::vec![*r; *dim],
            Family::LqBall { dim, scale, .. } | Family::CrossPolytope { dim, scale } => alloc::vec![*scale; *dim],
        }
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        positive("scale factor", t)?;
        Ok(match self {
            Family::Ball { dim, r } => Family::Ball { dim: *dim, r: r * t },
            Family::Box { half } => Family::Box {
                half: half.iter().map(|a| a * t).collect(),
            },
            Family::Ellipsoid { axes } => Family::Ellipsoid {
                axes: axes.iter().map(|a| a * t).collect(),
            },
            Family::LqBall { dim, q, scale } => Family::LqBall {
                dim: *dim,
                q: *q,
                scale: scale * t,
            },
            Family::CrossPolytope { dim, scale } => Family::CrossPolytope {
                dim: *dim,
                scale: scale * t,
            },
        })
    }

    /// If `other = t * self` for some `t > 0`, returns `t`.
    pub fn dilate_ratio(&self, other: &Family) -> Option<f64> {
        let ratio_all = |a: &[f64], b: &[f64]| {
            let t = b[0] / a[0];
            a.iter()
                .zip(b)
                .all(|(x, y)| (y - t * x).abs() <= 1e-14 * y.abs())
                .then_some(t)
        };
        match (self, other) {
            (Family::Ball { dim: d1, r: r1 }, Family::Ball { dim: d2, r: r2 }) if d1 == d2 => Some(r2 / r1),
            (Family::Box { half: a }, Family::Box { half: b }) if a.len() == b.len() => ratio_all(a, b),
            (Family::Ellipsoid { axes: a }, Family::Ellipsoid { axes: b }) if a.len() == b.len() => ratio_all(a, b),
            (Family::LqBall { dim: d1, q: q1, scale: s1 }, Family::LqBall { dim: d2, q: q2, scale: s2 })
                if d1 == d2 && q1 == q2 =>
            {
                Some(s2 / s1)
            }
            (Family::CrossPolytope { dim: d1, scale: s1 }, Family::CrossPolytope { dim: d2, scale: s2 }) if d1 == d2 => {
                Some(s2 / s1)
            }
            _ => None,
        }
    }

    /// Facet normals and heights when the family is a polytope.
    pub fn as_halfspaces(&self) -> Option<(Vec<Direction>, Vec<f64>)> {
        match self {
            Family::Box { half } => {
                let n = half.len();
                let mut normals = Vec::with_capacity(2 * n);
                let mut heights = Vec::with_capacity(2 * n);
                for (i, &a) in half.iter().enumerate() {
                    normals.push(Direction::axis(n, i, true));
                    heights.push(a);
                    normals.push(Direction::axis(n, i, false));
                    heights.push(a);
                }
                Some((normals, heights))
            }
            Family::CrossPolytope { dim, scale } => {
                let n = *dim;
                let c = 1.0 / (n as f64).sqrt();
                let mut normals = Vec::with_capacity(1 << n);
                for mask in 0..(1usize << n) {
                    let v: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -c } else { c }).collect();
                    normals.push(Direction::from_slice_unchecked(&v));
                }
                let heights = alloc::vec![scale * c; normals.len()];
                Some((normals, heights))
            }
            Family::LqBall { dim, q, scale } if *q == 1.0 => Family::CrossPolytope { dim: *dim, scale: *scale }.as_halfspaces(),
            Family::LqBall { dim, q, scale } if q.is_infinite() => Family::Box {
                half: alloc::vec![*scale; *dim],
            }
            .as_halfspaces(),
            _ => None,
        }
    }

    /// Polar-angle kinks of the radial function in the plane (box corners).
    pub(crate) fn kink_angles(&self) -> Vec<f64> {
        match self {
            Family::Box { half } if half.len() == 2 => {
                let t = half[1].atan2(half[0]);
                let pi = core::f64::consts::PI;
                alloc::vec![t, pi - t, t - pi, -t]
            }
            Family::CrossPolytope { dim: 2, .. } => {
                let pi = core::f64::consts::PI;
                alloc::vec![0.0, pi / 2.0, pi, -pi / 2.0]
            }
            _ => Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Ball { .. } => "ball",
            Family::Box { .. } => "box",
            Family::Ellipsoid { .. } => "ellipsoid",
            Family::LqBall { .. } => "lq_ball",
            Family::CrossPolytope { .. } => "cross_polytope",
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Family::Ball { dim, r } => Family::ball(*dim, *r).map(|_| ()),
            Family::Box { half } => Family::cube(half).map(|_| ()),
            Family::Ellipsoid { axes } => Family::ellipsoid(axes).map(|_| ()),
            Family::LqBall { dim, q, scale } => Family::lq_ball(*dim, *q, *scale).map(|_| ()),
            Family::CrossPolytope { dim, scale } => Family::cross_polytope(*dim, *scale).map(|_| ()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_examples() {
        let b = Family::ball(3, 2.0).unwrap();
        assert_eq!(b.support(&Direction::axis(3, 1, false)), 2.0);
        let s = Family::cube(&[1.0, 1.0]).unwrap();
        let u = Direction::normalized(&[1.0, 1.0]).unwrap();
        assert!((s.support(&u) - 2f64.sqrt()).abs() < 1e-15);
        let e = Family::ellipsoid(&[2.0, 1.0]).unwrap();
        assert_eq!(e.support(&Direction::axis(2, 0, true)), 2.0);
    }

    #[test]
    fn lq_duality() {
        // B_1 and B_inf are polar-dual shapes of the cross-polytope and cube
        let c = Family::lq_ball(3, 1.0, 1.0).unwrap();
        let x = Family::cross_polytope(3, 1.0).unwrap();
        let u = Direction::normalized(&[0.3, -0.5, 0.8]).unwrap();
        assert!((c.support(&u) - x.support(&u)).abs() < 1e-15);
        let q = Family::lq_ball(2, 2.0, 1.5).unwrap();
        assert!((q.support(&u_pl()) - 1.5).abs() < 1e-15);
        assert!((q.inradius() - 1.5).abs() < 1e-15);
        let q4 = Family::lq_ball(2, 4.0, 1.0).unwrap();
        // B_4^2 touches the unit circle on the axes and reaches 2^{1/4} on the diagonal
        assert!((q4.inradius() - 1.0).abs() < 1e-14);
        assert!((q4.circumradius() - 2f64.powf(0.25)).abs() < 1e-14);
    }

    fn u_pl() -> Direction {
        Direction::from_angle(0.7)
    }

    #[test]
    fn inradius_examples() {
        assert_eq!(Family::ball(2, 3.0).unwrap().inradius(), 3.0);
        assert_eq!(Family::cube(&[1.0, 2.0]).unwrap().inradius(), 1.0);
        assert_eq!(Family::ellipsoid(&[2.0, 1.0, 1.0]).unwrap().inradius(), 1.0);
    }

    #[test]
    fn dilates_detected() {
        let a = Family::cube(&[1.0, 2.0]).unwrap();
        assert_eq!(a.dilate_ratio(&a.scaled(3.0).unwrap()), Some(3.0));
        assert_eq!(a.dilate_ratio(&Family::cube(&[1.0, 3.0]).unwrap()), None);
    }
}

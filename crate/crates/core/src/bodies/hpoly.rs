//! H-polytopes `{x : <x, u_i> <= h_i}` with redundancy removal.

use alloc::vec::Vec;

use num_traits::Float;

use super::lp::support_lp;
use super::polygon::Polygon;
use crate::error::{ensure, Result};
use crate::geom::{check_dim, dot, norm, Direction};

/// Largest facet count for which 3D vertices are enumerated.
pub const MAX_ENUM_FACETS_3D: usize = 64;
/// Largest facet count for which the LP redundancy test is run.
pub const MAX_LP_REDUCTION: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Geometry {
    Planar(Polygon),
    /// Per-facet vertex loops, counter-clockwise seen from outside.
    Spatial { vertices: Vec<[f64; 3]>, facets: Vec<Vec<[f64; 3]>> },
    Implicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope {
    dim: usize,
    normals: Vec<Direction>,
    heights: Vec<f64>,
    symmetric: bool,
    reduced: bool,
    pub(crate) geometry: Geometry,
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-12 {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        *xk = d / det;
    }
    Some(x)
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Orthonormal pair spanning the plane orthogonal to `u`.
pub(crate) fn tangent_frame3(u: &[f64]) -> ([f64; 3], [f64; 3]) {
    let pick = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let uu = [u[0], u[1], u[2]];
    let e1 = cross3(uu, pick);
    let n1 = norm(&e1);
    let e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
    let e2 = cross3(uu, e1);
    (e1, e2)
}

pub(crate) fn polygon_area3(loop_: &[[f64; 3]], u: &[f64]) -> f64 {
    let mut s = [0.0; 3];
    for k in 0..loop_.len() {
        let c = cross3(loop_[k], loop_[(k + 1) % loop_.len()]);
        for r in 0..3 {
            s[r] += c[r];
        }
    }
    0.5 * dot(&s, u).abs()
}

/// Vertices and facet loops of a bounded 3D polytope by brute-force triple
/// intersection.
pub(crate) fn enumerate3(normals: &[Direction], heights: &[f64]) -> (Vec<[f64; 3]>, Vec<Vec<[f64; 3]>>) {
    let m = normals.len();
    let scale = heights.iter().copied().fold(0.0, f64::max);
    let tol = 1e-10 * scale;
    let mut verts: Vec<[f64; 3]> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let a = [
                    [normals[i][0], normals[i][1], normals[i][2]],
                    [normals[j][0], normals[j][1], normals[j][2]],
                    [normals[k][0], normals[k][1], normals[k][2]],
                ];
                let Some(x) = solve3(a, [heights[i], heights[j], heights[k]]) else {
                    continue;
                };
                if (0..m).all(|l| dot(&x, &normals[l]) <= heights[l] + tol)
                    && !verts.iter().any(|v| norm(&sub3(*v, x)) <= 1e3 * tol)
                {
                    verts.push(x);
                }
            }
        }
    }
    let mut facets = Vec::with_capacity(m);
    for i in 0..m {
        let on: Vec<[f64; 3]> = verts
            .iter()
            .copied()
            .filter(|v| (dot(v, &normals[i]) - heights[i]).abs() <= 1e3 * tol)
            .collect();
        if on.len() < 3 {
            facets.push(Vec::new());
            continue;
        }
        let (e1, e2) = tangent_frame3(&normals[i]);
        let c = on.iter().fold([0.0; 3], |acc, v| [acc[0] + v[0], acc[1] + v[1], acc[2] + v[2]]);
        let c = [c[0] / on.len() as f64, c[1] / on.len() as f64, c[2] / on.len() as f64];
        let mut keyed: Vec<(f64, [f64; 3])> = on
            .into_iter()
            .map(|v| {
                let d = sub3(v, c);
                (dot(&d, &e2).atan2(dot(&d, &e1)), v)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
        let loop_: Vec<[f64; 3]> = keyed.into_iter().map(|k| k.1).collect();
        if polygon_area3(&loop_, &normals[i]) <= 1e-12 * scale * scale {
            facets.push(Vec::new());
        } else {
            facets.push(loop_);
        }
    }
    (verts, facets)
}

impl HPolytope {
    /// Builds and reduces the polytope. Heights must be positive, so the
    /// origin is an interior point.
    pub fn new(normals: Vec<Direction>, heights: Vec<f64>) -> Result<Self> {
        ensure!(!normals.is_empty(), InvalidInput, "polytope needs at least one halfspace");
        ensure!(
            normals.len() == heights.len(),
            InvalidInput,
            "{} normals but {} heights",
            normals.len(),
            heights.len()
        );
        let dim = normals[0].dim();
        check_dim(dim)?;
        for (u, h) in normals.iter().zip(&heights) {
            ensure!(u.dim() == dim, InvalidInput, "normals of mixed dimension");
            ensure!(h.is_finite() && *h > 0.0, Domain, "polytope heights must be positive, got {h}");
        }
        let (normals, heights, reduced, geometry) = if dim == 2 {
            let poly = Polygon::from_halfplanes(&normals, &heights)?;
            let rn: Vec<Direction> = poly.edges.iter().map(|&i| normals[i]).collect();
            let rh: Vec<f64> = poly.edges.iter().map(|&i| heights[i]).collect();
            let poly = Polygon::from_halfplanes(&rn, &rh)?;
            (rn, rh, true, Geometry::Planar(poly))
        } else {
            for i in 0..dim {
                for s in [true, false] {
                    support_lp(&normals, &heights, &Direction::axis(dim, i, s))?;
                }
            }
            if dim == 3 && normals.len() <= MAX_ENUM_FACETS_3D {
                let (verts, facets) = enumerate3(&normals, &heights);
                let mut rn = Vec::new();
                let mut rh = Vec::new();
                let mut rf = Vec::new();
                for ((u, h), f) in normals.into_iter().zip(heights).zip(facets) {
                    if !f.is_empty() {
                        rn.push(u);
                        rh.push(h);
                        rf.push(f);
                    }
                }
                (rn, rh, true, Geometry::Spatial { vertices: verts, facets: rf })
            } else if normals.len() <= MAX_LP_REDUCTION {
                let mut keep = alloc::vec![true; normals.len()];
                for i in 0..normals.len() {
                    let others_n: Vec<Direction> = (0..normals.len())
                        .filter(|&j| j != i && keep[j])
                        .map(|j| normals[j])
                        .collect();
                    let others_h: Vec<f64> = (0..normals.len())
                        .filter(|&j| j != i && keep[j])
                        .map(|j| heights[j])
                        .collect();
                    // redundant when the remaining constraints already imply it
                    if let Ok(s) = support_lp(&others_n, &others_h, &normals[i]) {
                        if s.value <= heights[i] * (1.0 + 1e-12) {
                            keep[i] = false;
                        }
                    }
                }
                let rn = (0..normals.len()).filter(|&i| keep[i]).map(|i| normals[i]).collect();
                let rh = (0..heights.len()).filter(|&i| keep[i]).map(|i| heights[i]).collect();
                (rn, rh, true, Geometry::Implicit)
            } else {
                (normals, heights, false, Geometry::Implicit)
            }
        };
        let symmetric = normals.iter().zip(&heights).all(|(u, h)| {
            let m = u.negated();
            normals
                .iter()
                .zip(&heights)
                .any(|(v, g)| norm(&sub_n(v, &m)) < 1e-12 && (g - h).abs() <= 1e-12 * h)
        });
        Ok(Self {
            dim,
            normals,
            heights,
            symmetric,
            reduced,
            geometry,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Direction] {
        &self.normals
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Whether redundant halfspaces have been removed.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn polygon(&self) -> Option<&Polygon> {
        match &self.geometry {
            Geometry::Planar(p) => Some(p),
            _ => None,
        }
    }

    /// Facet loops when they were enumerated (3D, few facets).
    pub fn facet_loops(&self) -> Option<&[Vec<[f64; 3]>]> {
        match &self.geometry {
            Geometry::Spatial { facets, .. } => Some(facets),
            _ => None,
        }
    }

    pub fn vertices(&self) -> Option<Vec<Vec<f64>>> {
        match &self.geometry {
            Geometry::Planar(p) => Some(p.vertices.iter().map(|v| v.to_vec()).collect()),
            Geometry::Spatial { vertices, .. } => Some(vertices.iter().map(|v| v.to_vec()).collect()),
            Geometry::Implicit => None,
        }
    }

    pub fn support_vec(&self, u: &[f64]) -> Result<f64> {
        match &self.geometry {
            Geometry::Planar(p) => Ok(p.support_vec(u)),
            Geometry::Spatial { vertices, .. } => Ok(vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)),
            Geometry::Implicit => support_lp(&self.normals, &self.heights, u).map(|s| s.value),
        }
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        match &self.geometry {
            Geometry::Planar(p) => p.contains_point(x),
            _ => self.normals.iter().zip(&self.heights).all(|(u, h)| dot(u, x) <= *h),
        }
    }

    /// Distance from the origin to the boundary along `x` (need not be unit).
    pub fn radial(&self, x: &[f64]) -> f64 {
        match &self.geometry {
            Geometry::Planar(p) => p.radial(x),
            _ => {
                let nx = norm(x);
                self.normals
                    .iter()
                    .zip(&self.heights)
                    .filter_map(|(u, h)| {
                        let c = dot(u, x);
                        (c > 0.0).then(|| h * nx / c)
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn inradius(&self) -> f64 {
        self.heights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Exact when vertices are known; otherwise the circumradius of the
    /// bounding box, an upper bound.
    pub fn circumradius(&self) -> f64 {
        match &self.geometry {
            Geometry::Planar(p) => p.circumradius(),
            Geometry::Spatial { vertices, .. } => vertices.iter().map(|v| norm(v)).fold(0.0, f64::max),
            Geometry::Implicit => {
                let e = self.extents();
                norm(&e)
            }
        }
    }

    pub fn extents(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                let a = self.support_vec(&Direction::axis(self.dim, i, true)).unwrap_or(f64::INFINITY);
                let b = self.support_vec(&Direction::axis(self.dim, i, false)).unwrap_or(f64::INFINITY);
                a.max(b)
            })
            .collect()
    }

    /// Lebesgue volume when the facet structure is known.
    pub fn volume(&self) -> Option<f64> {
        match &self.geometry {
            Geometry::Planar(p) => Some(p.area()),
            Geometry::Spatial { facets, .. } => Some(
                facets
                    .iter()
                    .zip(&self.normals)
                    .zip(&self.heights)
                    .map(|((f, u), h)| h * polygon_area3(f, u) / 3.0)
                    .sum(),
            ),
            Geometry::Implicit => None,
        }
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        ensure!(t.is_finite() && t > 0.0, InvalidInput, "scale factor must be positive");
        Self::new(self.normals.clone(), self.heights.iter().map(|h| h * t).collect())
    }

    pub(crate) fn kink_angles(&self) -> Vec<f64> {
        match &self.geometry {
            Geometry::Planar(p) => p.vertex_polar_angles(),
            _ => Vec::new(),
        }
    }
}

fn sub_n(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

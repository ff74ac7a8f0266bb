//! Exact planar geometry for polygons given by halfplanes `<x, u_i> <= h_i`.
//!
//! The facets of `{x : <x, u_i / h_i> <= 1}` are the vertices of the convex
//! hull of the dual points `u_i / h_i`, so reduction and vertex enumeration
//! reduce to one monotone-chain hull.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{ensure, Result};
use crate::geom::Direction;

const TAU: f64 = 2.0 * PI;

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull (counter-clockwise, collinear points dropped) of `pts`;
/// returns indices into `pts`.
pub(crate) fn hull_indices(pts: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
    });
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross(pts[lower[lower.len() - 2]], pts[lower[lower.len() - 1]], pts[i]) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross(pts[upper[upper.len() - 2]], pts[upper[upper.len() - 1]], pts[i]) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // nearly coincident points come from nearly equal halfplanes, whose
    // intersection is ill-conditioned; keep one of each cluster
    let close = |a: [f64; 2], b: [f64; 2]| {
        let d = (a[0] - b[0]).hypot(a[1] - b[1]);
        d <= 1e-11 * a[0].hypot(a[1]).max(b[0].hypot(b[1]))
    };
    let mut out: Vec<usize> = Vec::with_capacity(lower.len());
    for i in lower {
        if out.last().is_none_or(|&j| !close(pts[j], pts[i])) {
            out.push(i);
        }
    }
    while out.len() > 1 && close(pts[out[0]], pts[out[out.len() - 1]]) {
        out.pop();
    }
    out
}

/// Bounded convex polygon containing the origin in its interior.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    /// Vertices in counter-clockwise order.
    pub vertices: Vec<[f64; 2]>,
    /// `edges[k]` is the index (into the input halfplanes) of the constraint
    /// supporting the edge from `vertices[k-1]` to `vertices[k]`.
    pub edges: Vec<usize>,
    /// Unwrapped outer-normal angle of each edge, increasing.
    normal_angles: Vec<f64>,
    /// Unwrapped polar angle of each vertex, increasing.
    vertex_angles: Vec<f64>,
    normals: Vec<[f64; 2]>,
    heights: Vec<f64>,
}

fn unwrap_from(base: f64, a: f64) -> f64 {
    let mut t = a;
    while t < base {
        t += TAU;
    }
    while t >= base + TAU {
        t -= TAU;
    }
    t
}

impl Polygon {
    /// Builds the polygon cut out by the halfplanes. Heights must be positive.
    pub fn from_halfplanes(normals: &[Direction], heights: &[f64]) -> Result<Self> {
        ensure!(normals.len() == heights.len(), InvalidInput, "normals/heights length mismatch");
        for (u, h) in normals.iter().zip(heights) {
            ensure!(u.dim() == 2, InvalidInput, "planar polygon needs 2D normals");
            ensure!(*h > 0.0 && h.is_finite(), Domain, "halfplane height must be positive, got {h}");
        }
        let dual: Vec<[f64; 2]> = normals
            .iter()
            .zip(heights)
            .map(|(u, h)| [u[0] / h, u[1] / h])
            .collect();
        let hull = hull_indices(&dual);
        ensure!(hull.len() >= 3, Domain, "halfplanes do not bound a polygon");
        // origin must lie strictly inside the dual hull
        for k in 0..hull.len() {
            let a = dual[hull[k]];
            let b = dual[hull[(k + 1) % hull.len()]];
            ensure!(cross(a, b, [0.0, 0.0]) > 0.0, Domain, "halfplanes do not bound a polygon");
        }
        let m = hull.len();
        let mut vertices = Vec::with_capacity(m);
        for k in 0..m {
            let (i, j) = (hull[k], hull[(k + 1) % m]);
            let (a, b) = (dual[i], dual[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            vertices.push([(b[1] - a[1]) / det, (a[0] - b[0]) / det]);
        }
        // edge for constraint hull[k] runs from vertex k-1 to vertex k
        let edges = hull.clone();
        let raw_n: Vec<f64> = edges.iter().map(|&i| normals[i].angle()).collect();
        let mut normal_angles = Vec::with_capacity(m);
        normal_angles.push(raw_n[0]);
        for k in 1..m {
            let t = unwrap_from(normal_angles[k - 1], raw_n[k]);
            normal_angles.push(t);
        }
        let mut vertex_angles = Vec::with_capacity(m);
        vertex_angles.push(vertices[0][1].atan2(vertices[0][0]));
        for k in 1..m {
            let a = vertices[k][1].atan2(vertices[k][0]);
            let t = unwrap_from(vertex_angles[k - 1], a);
            vertex_angles.push(t);
        }
        Ok(Self {
            vertices,
            edges,
            normal_angles,
            vertex_angles,
            normals: normals.iter().map(|u| [u[0], u[1]]).collect(),
            heights: heights.to_vec(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn sector(angles: &[f64], phi: f64) -> usize {
        let t = unwrap_from(angles[0], phi);
        // largest k with angles[k] <= t
        angles.partition_point(|&a| a <= t).saturating_sub(1)
    }

    /// Exact support value at an arbitrary planar vector.
    pub fn support_vec(&self, u: &[f64]) -> f64 {
        let k = Self::sector(&self.normal_angles, u[1].atan2(u[0]));
        let v = self.vertices[k];
        let w = self.vertices[(k + self.vertices.len() - 1) % self.vertices.len()];
        let nxt = self.vertices[(k + 1) % self.vertices.len()];
        // guard against rounding at sector boundaries
        (v[0] * u[0] + v[1] * u[1])
            .max(w[0] * u[0] + w[1] * u[1])
            .max(nxt[0] * u[0] + nxt[1] * u[1])
    }

    /// Index into `edges` of the edge hit by the ray through `x`.
    fn edge_for_ray(&self, x: &[f64]) -> usize {
        let k = Self::sector(&self.vertex_angles, x[1].atan2(x[0]));
        (k + 1) % self.vertices.len()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        if x[0] == 0.0 && x[1] == 0.0 {
            return true;
        }
        let e = self.edges[self.edge_for_ray(x)];
        let u = self.normals[e];
        u[0] * x[0] + u[1] * x[1] <= self.heights[e]
    }

    /// Distance from the origin to the boundary along the direction `x`.
    pub fn radial(&self, x: &[f64]) -> f64 {
        let nrm = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let e = self.edges[self.edge_for_ray(x)];
        let u = self.normals[e];
        self.heights[e] * nrm / (u[0] * x[0] + u[1] * x[1])
    }

    pub fn area(&self) -> f64 {
        let m = self.vertices.len();
        0.5 * (0..m)
            .map(|k| {
                let a = self.vertices[k];
                let b = self.vertices[(k + 1) % m];
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        let m = self.vertices.len();
        (0..m)
            .map(|k| {
                let a = self.vertices[k];
                let b = self.vertices[(k + 1) % m];
                ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
            })
            .sum()
    }

    /// Endpoints of the edge carried by input constraint `i`, if it is a facet.
    pub fn edge_of(&self, i: usize) -> Option<([f64; 2], [f64; 2])> {
        let m = self.vertices.len();
        self.edges
            .iter()
            .position(|&e| e == i)
            .map(|k| (self.vertices[(k + m - 1) % m], self.vertices[k]))
    }

    /// Polar angles of the vertices, the kinks of the radial function.
    pub fn vertex_polar_angles(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v[1].atan2(v[0])).collect()
    }

    pub fn circumradius(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearly_repeated_halfplanes() {
        let (mut n, mut h) = square();
        let t = PI / 4.0;
        n.push(Direction::from_angle(t));
        n.push(Direction::normalized(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap());
        h.extend([1.2, 1.2 * (1.0 + 1e-15)]);
        let p = Polygon::from_halfplanes(&n, &h).unwrap();
        assert_eq!(p.vertex_count(), 5);
        for v in &p.vertices {
            assert!(v[0].abs() <= 1.0 + 1e-12 && v[1].abs() <= 1.0 + 1e-12);
        }
        assert!((p.area() - (4.0 - (2.0 - 1.2 * 2f64.sqrt()).powi(2) / 2.0)).abs() < 1e-12);
    }

    fn square() -> (Vec<Direction>, Vec<f64>) {
        let n = (0..4)
            .map(|k| Direction::from_angle(k as f64 * PI / 2.0))
            .collect();
        (n, alloc::vec![1.0; 4])
    }

    #[test]
    fn square_geometry() {
        let (n, h) = square();
        let p = Polygon::from_halfplanes(&n, &h).unwrap();
        assert_eq!(p.vertex_count(), 4);
        assert!((p.area() - 4.0).abs() < 1e-14);
        assert!((p.perimeter() - 8.0).abs() < 1e-14);
        let u = Direction::from_angle(PI / 4.0);
        assert!((p.support_vec(&u) - 2f64.sqrt()).abs() < 1e-14);
        assert!(p.contains_point(&[0.99, -0.99]));
        assert!(!p.contains_point(&[1.01, 0.0]));
        assert!((p.radial(&[1.0, 1.0]) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn redundant_halfplanes_removed() {
        let (mut n, mut h) = square();
        // touches only at a corner
        n.push(Direction::from_angle(PI / 4.0));
        h.push(2f64.sqrt());
        // strictly redundant
        n.push(Direction::from_angle(3.0 * PI / 4.0));
        h.push(5.0);
        let p = Polygon::from_halfplanes(&n, &h).unwrap();
        assert_eq!(p.vertex_count(), 4);
        assert!(p.edge_of(4).is_none() && p.edge_of(5).is_none());
        assert!(p.edge_of(0).is_some());
    }

    #[test]
    fn unbounded_rejected() {
        let n = alloc::vec![Direction::from_angle(0.0), Direction::from_angle(PI)];
        assert!(Polygon::from_halfplanes(&n, &[1.0, 1.0]).is_err());
    }
}

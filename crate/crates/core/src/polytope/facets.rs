use alloc::vec::Vec;

use num_traits::Float;

use crate::bodies::{Polygon, MAX_ENUM_FACETS_3D};
use crate::error::{bail, ensure, Result};
use crate::geom::{Direction, MAX_DIM};
use crate::measures::Density;
use crate::quad::{gauss_legendre, integrate, normal_interval_mass, normal_pdf};

/// How a facet table was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacetMethod {
    /// Planar vertex enumeration and adaptive quadrature along edges.
    Exact2d,
    /// Axis-aligned box, product formula.
    AnalyticBox,
    /// Enumerated 3D facet polygons, triangle quadrature.
    Facet3d,
}

impl FacetMethod {
    pub fn name(&self) -> &'static str {
        match self {
            FacetMethod::Exact2d => "exact-2d",
            FacetMethod::AnalyticBox => "analytic-box",
            FacetMethod::Facet3d => "facet-quadrature-3d",
        }
    }
}

/// Weighted `(n-1)`-measures of the facets, one per input normal.
#[derive(Clone, Debug, PartialEq)]
pub struct FacetMeasureTable {
    pub measures: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Whether the normal carries a facet of positive area.
    pub present: Vec<bool>,
    pub method: FacetMethod,
}

impl FacetMeasureTable {
    pub fn total(&self) -> f64 {
        self.measures.iter().sum()
    }
}

/// Facets present for each input normal, decided geometrically.
pub(crate) fn active_facets(normals: &[Direction], heights: &[f64]) -> Result<Vec<bool>> {
    let n = normals[0].dim();
    if let Some(_box) = box_half_widths(normals, heights) {
        return Ok(alloc::vec![true; normals.len()]);
    }
    match n {
        2 => {
            let poly = Polygon::from_halfplanes(normals, heights)?;
            let mut on = alloc::vec![false; normals.len()];
            for &e in &poly.edges {
                on[e] = true;
            }
            Ok(on)
        }
        3 if normals.len() <= MAX_ENUM_FACETS_3D => {
            let (_, facets) = crate::bodies::enumerate_facets3(normals, heights);
            Ok(facets.iter().map(|f| !f.is_empty()).collect())
        }
        _ => bail!(
            Unsupported,
            "facet structure is computed for n = 2, boxes, and 3D fans with at most {MAX_ENUM_FACETS_3D} normals"
        ),
    }
}

/// Half-widths when the halfspaces describe an axis-aligned box.
fn box_half_widths(normals: &[Direction], heights: &[f64]) -> Option<Vec<f64>> {
    let n = normals[0].dim();
    if normals.len() != 2 * n {
        return None;
    }
    let mut half = alloc::vec![f64::NAN; n];
    let mut seen = [[false; 2]; MAX_DIM];
    for (u, h) in normals.iter().zip(heights) {
        let nz: Vec<usize> = (0..n).filter(|&i| u[i] != 0.0).collect();
        if nz.len() != 1 || u[nz[0]].abs() != 1.0 {
            return None;
        }
        let j = nz[0];
        let side = usize::from(u[j] < 0.0);
        if seen[j][side] {
            return None;
        }
        seen[j][side] = true;
        if half[j].is_nan() {
            half[j] = *h;
        } else if half[j] != *h {
            return None;
        }
    }
    Some(half)
}

fn edge_integral(density: &Density, a: [f64; 2], b: [f64; 2]) -> (f64, f64) {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    if let Density::Lebesgue = density {
        return (len, 0.0);
    }
    let r = integrate(
        |t| density.weight(&[a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]),
        0.0,
        1.0,
        1e-300,
        1e-14,
    );
    (len * r.value, len * r.error)
}

/// Duffy-mapped Gauss-Legendre rule on a triangle.
fn triangle_integral(density: &Density, v: [[f64; 3]; 3], order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let e1 = [v[1][0] - v[0][0], v[1][1] - v[0][1], v[1][2] - v[0][2]];
    let e2 = [v[2][0] - v[1][0], v[2][1] - v[1][1], v[2][2] - v[1][2]];
    let c = [
        e1[1] * e2[2] - e1[2] * e2[1],
        e1[2] * e2[0] - e1[0] * e2[2],
        e1[0] * e2[1] - e1[1] * e2[0],
    ];
    let jac = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let mut acc = 0.0;
    for (si, wi) in x.iter().zip(&w) {
        let s = 0.5 * (si + 1.0);
        for (ti, wj) in x.iter().zip(&w) {
            let t = 0.5 * (ti + 1.0);
            let p = [
                v[0][0] + s * e1[0] + s * t * e2[0],
                v[0][1] + s * e1[1] + s * t * e2[1],
                v[0][2] + s * e1[2] + s * t * e2[2],
            ];
            acc += wi * wj * 0.25 * s * density.weight(&p);
        }
    }
    acc * jac
}

fn facet3_integral(density: &Density, loop_: &[[f64; 3]], order: usize) -> f64 {
    let m = loop_.len() as f64;
    let c = loop_.iter().fold([0.0; 3], |a, v| [a[0] + v[0] / m, a[1] + v[1] / m, a[2] + v[2] / m]);
    (0..loop_.len())
        .map(|k| triangle_integral(density, [c, loop_[k], loop_[(k + 1) % loop_.len()]], order))
        .sum()
}

/// Weighted facet measures of the polytope `{⟨x, u_i⟩ <= h_i}`, one entry
/// per halfspace (zero for halfspaces that do not support a facet).
pub fn facet_measures_of(normals: &[Direction], heights: &[f64], density: &Density) -> Result<FacetMeasureTable> {
    ensure!(!normals.is_empty() && normals.len() == heights.len(), InvalidInput, "bad halfspace list");
    let n = normals[0].dim();
    let count = normals.len();
    if let Some(half) = box_half_widths(normals, heights) {
        let mut measures = Vec::with_capacity(count);
        for u in normals {
            let j = (0..n).find(|&i| u[i] != 0.0).unwrap_or(0);
            let m = match density {
                Density::Lebesgue => (0..n).filter(|&k| k != j).map(|k| 2.0 * half[k]).product(),
                Density::Gaussian => {
                    normal_pdf(half[j]) * (0..n).filter(|&k| k != j).map(|k| normal_interval_mass(half[k])).product::<f64>()
                }
                _ => f64::NAN,
            };
            measures.push(m);
        }
        if measures.iter().all(|m| m.is_finite()) {
            return Ok(FacetMeasureTable {
                measures,
                stderr: alloc::vec![0.0; count],
                present: alloc::vec![true; count],
                method: FacetMethod::AnalyticBox,
            });
        }
    }
    match n {
        2 => {
            let poly = Polygon::from_halfplanes(normals, heights)?;
            let mut measures = alloc::vec![0.0; count];
            let mut stderr = alloc::vec![0.0; count];
            let mut present = alloc::vec![false; count];
            for (i, slot) in measures.iter_mut().enumerate() {
                if let Some((a, b)) = poly.edge_of(i) {
                    let (v, e) = edge_integral(density, a, b);
                    *slot = v;
                    stderr[i] = e;
                    present[i] = true;
                }
            }
            Ok(FacetMeasureTable {
                measures,
                stderr,
                present,
                method: FacetMethod::Exact2d,
            })
        }
        3 if count <= MAX_ENUM_FACETS_3D => {
            let (_, facets) = crate::bodies::enumerate_facets3(normals, heights);
            ensure!(
                facets.iter().filter(|f| !f.is_empty()).count() >= 4,
                Domain,
                "halfspaces do not bound a polytope"
            );
            let mut measures = alloc::vec![0.0; count];
            let mut stderr = alloc::vec![0.0; count];
            let mut present = alloc::vec![false; count];
            for (i, f) in facets.iter().enumerate() {
                if f.is_empty() {
                    continue;
                }
                let fine = facet3_integral(density, f, 24);
                let coarse = facet3_integral(density, f, 16);
                measures[i] = fine;
                stderr[i] = (fine - coarse).abs();
                present[i] = true;
            }
            Ok(FacetMeasureTable {
                measures,
                stderr,
                present,
                method: FacetMethod::Facet3d,
            })
        }
        _ => bail!(
            Unsupported,
            "facet measures are computed for n = 2, boxes, and 3D polytopes with at most {MAX_ENUM_FACETS_3D} halfspaces"
        ),
    }
}

/// Weighted facet measures of a reduced polytope.
pub fn facet_measures(p: &crate::bodies::HPolytope, density: &Density) -> Result<FacetMeasureTable> {
    facet_measures_of(p.normals(), p.heights(), density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Body, HPolytope};
    use crate::quad::normal_cdf;

    fn square() -> HPolytope {
        Body::cube(&[1.0, 1.0]).unwrap().to_polytope().unwrap()
    }

    #[test]
    fn square_edges() {
        let t = facet_measures(&square(), &Density::Lebesgue).unwrap();
        assert!(t.measures.iter().all(|m| (m - 2.0).abs() < 1e-15));
        let t = facet_measures(&square(), &Density::Gaussian).unwrap();
        let exact = (-0.5f64).exp() * (2.0 * normal_cdf(1.0) - 1.0) / (2.0 * core::f64::consts::PI).sqrt();
        assert!(t.measures.iter().all(|m| (m - exact).abs() < 1e-14));
        // the quadrature path agrees with the product formula
        let n = square().normals().to_vec();
        let mut n2 = n.clone();
        n2.push(Direction::normalized(&[1.0, 1.0]).unwrap());
        let mut h2 = square().heights().to_vec();
        h2.push(10.0);
        let q = facet_measures_of(&n2, &h2, &Density::Gaussian).unwrap();
        assert_eq!(q.method, FacetMethod::Exact2d);
        assert!(!q.present[4] && q.measures[4] == 0.0);
        for i in 0..4 {
            assert!((q.measures[i] - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn cut_square_perimeter() {
        let mut n = square().normals().to_vec();
        let mut h = square().heights().to_vec();
        n.push(Direction::normalized(&[1.0, 1.0]).unwrap());
        h.push(1.2);
        n.push(Direction::normalized(&[-1.0, -1.0]).unwrap());
        h.push(1.2);
        let t = facet_measures_of(&n, &h, &Density::Lebesgue).unwrap();
        let p = Polygon::from_halfplanes(&n, &h).unwrap();
        assert_eq!(p.vertex_count(), 6);
        assert!((t.total() - p.perimeter()).abs() < 1e-12);
    }

    #[test]
    fn cube_and_octahedron_surface() {
        let c = Body::cube(&[1.0, 0.5, 2.0]).unwrap().to_polytope().unwrap();
        let t = facet_measures(&c, &Density::Lebesgue).unwrap();
        assert!((t.total() - 2.0 * (2.0 + 8.0 + 4.0)).abs() < 1e-12);
        let o = Body::from_family(crate::bodies::Family::cross_polytope(3, 1.0).unwrap())
            .unwrap()
            .to_polytope()
            .unwrap();
        let t = facet_measures(&o, &Density::Lebesgue).unwrap();
        assert_eq!(t.method, FacetMethod::Facet3d);
        // eight equilateral triangles with side √2
        assert!((t.total() - 8.0 * 3f64.sqrt() / 2.0).abs() < 1e-12);
        let g = facet_measures(&o, &Density::Gaussian).unwrap();
        assert!(g.stderr.iter().all(|e| *e < 1e-12));
    }
}

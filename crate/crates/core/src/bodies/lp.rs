//! Support values of H-polytopes by linear programming.
//!
//! `max <u, x>  s.t.  <u_i, x> <= h_i` is solved through its dual
//! `min sum c_i h_i  s.t.  sum c_i u_i = u, c >= 0`, which has only `n`
//! equality rows. A two-phase revised simplex with an explicit `n x n` basis
//! inverse is plenty at n <= 6.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::geom::{Direction, MAX_DIM};

const PIVOT_TOL: f64 = 1e-11;

/// Optimal value and a maximizer of the primal problem.
#[derive(Clone, Copy, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub point: [f64; MAX_DIM],
}

fn invert(b: &[[f64; MAX_DIM]; MAX_DIM], n: usize) -> Option<[[f64; MAX_DIM]; MAX_DIM]> {
    let mut a = *b;
    let mut inv = [[0.0; MAX_DIM]; MAX_DIM];
    for (i, row) in inv.iter_mut().enumerate().take(n) {
        row[i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for k in 0..n {
            a[col][k] /= d;
            inv[col][k] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for k in 0..n {
                        a[r][k] -= f * a[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Maximizes `<u, x>` over `{x : <normals_i, x> <= heights_i}`.
///
/// Returns a domain error when the objective is unbounded (`u` outside the
/// cone spanned by the normals).
pub fn support_lp(normals: &[Direction], heights: &[f64], u: &[f64]) -> Result<LpSolution> {
    let n = u.len();
    let m = normals.len();
    // row signs so that the right-hand side is nonnegative
    let mut sign = [1.0; MAX_DIM];
    let mut rhs = [0.0; MAX_DIM];
    for r in 0..n {
        if u[r] < 0.0 {
            sign[r] = -1.0;
        }
        rhs[r] = sign[r] * u[r];
    }
    // columns 0..m are real, m..m+n artificial
    let col = |j: usize, r: usize| -> f64 {
        if j < m {
            sign[r] * normals[j][r]
        } else if j - m == r {
            1.0
        } else {
            0.0
        }
    };
    let mut basis: Vec<usize> = (m..m + n).collect();
    let mut in_basis = alloc::vec![false; m + n];
    for &b in &basis {
        in_basis[b] = true;
    }
    let max_iter = 50 * (m + n) + 1000;
    for phase in 0..2 {
        let cost = |j: usize| -> f64 {
            if phase == 0 {
                if j >= m {
                    1.0
                } else {
                    0.0
                }
            } else if j >= m {
                f64::INFINITY
            } else {
                heights[j]
            }
        };
        let mut iter = 0;
        loop {
            iter += 1;
            if iter > max_iter {
                bail!(Numeric, "simplex did not terminate after {max_iter} iterations");
            }
            let mut bmat = [[0.0; MAX_DIM]; MAX_DIM];
            for (k, &j) in basis.iter().enumerate() {
                for (r, row) in bmat.iter_mut().enumerate().take(n) {
                    row[k] = col(j, r);
                }
            }
            let Some(inv) = invert(&bmat, n) else {
                bail!(Numeric, "singular simplex basis");
            };
            // multipliers y solve B^T y = c_B
            let mut y = [0.0; MAX_DIM];
            for r in 0..n {
                y[r] = (0..n)
                    .map(|k| {
                        let c = cost(basis[k]);
                        let c = if c.is_infinite() { 0.0 } else { c };
                        inv[k][r] * c
                    })
                    .sum();
            }
            let mut xb = [0.0; MAX_DIM];
            for k in 0..n {
                xb[k] = (0..n).map(|r| inv[k][r] * rhs[r]).sum();
            }
            let bland = iter > 20 * (m + n);
            let mut enter = None;
            let mut best = 0.0;
            let last = if phase == 0 { m + n } else { m };
            for j in 0..last {
                if in_basis[j] {
                    continue;
                }
                let c = cost(j);
                let d = c - (0..n).map(|r| y[r] * col(j, r)).sum::<f64>();
                if d < -1e-12 * (1.0 + c.abs()) && d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(e) = enter else {
                if phase == 0 {
                    let infeas: f64 = (0..n).filter(|&k| basis[k] >= m).map(|k| xb[k]).sum();
                    let scale = rhs.iter().take(n).fold(0.0, |a: f64, b| a.max(b.abs())).max(1.0);
                    if infeas > 1e-9 * scale {
                        bail!(Domain, "support is unbounded: direction outside the normal cone");
                    }
                    // drive zero-level artificials out of the basis
                    for k in 0..n {
                        if basis[k] < m {
                            continue;
                        }
                        let swap = (0..m).find(|&j| {
                            !in_basis[j] && (0..n).map(|r| inv[k][r] * col(j, r)).sum::<f64>().abs() > 1e-9
                        });
                        match swap {
                            Some(j) => {
                                in_basis[basis[k]] = false;
                                basis[k] = j;
                                in_basis[j] = true;
                            }
                            None => bail!(Domain, "normals do not span the ambient space"),
                        }
                    }
                    break;
                }
                let value = (0..n).map(|k| heights[basis[k]] * xb[k]).sum();
                let mut point = [0.0; MAX_DIM];
                for r in 0..n {
                    point[r] = sign[r] * y[r];
                }
                return Ok(LpSolution { value, point });
            };
            let mut w = [0.0; MAX_DIM];
            for k in 0..n {
                w[k] = (0..n).map(|r| inv[k][r] * col(e, r)).sum();
            }
            let mut leave = None;
            let mut ratio = f64::INFINITY;
            for k in 0..n {
                if w[k] > PIVOT_TOL {
                    let t = xb[k].max(0.0) / w[k];
                    let better = t < ratio - 1e-15
                        || (t <= ratio + 1e-15 && leave.is_some_and(|l: usize| basis[k] < basis[l]));
                    if better {
                        ratio = t;
                        leave = Some(k);
                    }
                }
            }
            let Some(l) = leave else {
                // dual unbounded below means the primal is infeasible, which
                // cannot happen for positive heights
                bail!(Domain, "polytope is empty");
            };
            in_basis[basis[l]] = false;
            basis[l] = e;
            in_basis[e] = true;
        }
    }
    bail!(Numeric, "simplex fell through")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube3() -> (Vec<Direction>, Vec<f64>) {
        let mut n = Vec::new();
        for i in 0..3 {
            n.push(Direction::axis(3, i, true));
            n.push(Direction::axis(3, i, false));
        }
        (n, alloc::vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0])
    }

    #[test]
    fn box_support() {
        let (n, h) = cube3();
        let u = [0.48, -0.6, 0.64];
        let s = support_lp(&n, &h, &u).unwrap();
        assert!((s.value - (0.48 + 1.2 + 1.92)).abs() < 1e-12);
        assert!((s.point[0] - 1.0).abs() < 1e-12);
        assert!((s.point[1] + 2.0).abs() < 1e-12);
        assert!((s.point[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let n = alloc::vec![
            Direction::axis(3, 0, true),
            Direction::axis(3, 1, true),
            Direction::axis(3, 2, true)
        ];
        assert!(support_lp(&n, &[1.0; 3], &[-1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn degenerate_vertex() {
        // octahedron: four facets meet at each vertex
        let mut n = Vec::new();
        let c = 1.0 / 3f64.sqrt();
        for m in 0..8 {
            let v = [
                if m & 1 == 0 { c } else { -c },
                if m & 2 == 0 { c } else { -c },
                if m & 4 == 0 { c } else { -c },
            ];
            n.push(Direction::from_slice_unchecked(&v));
        }
        let h = alloc::vec![c; 8];
        let s = support_lp(&n, &h, &[0.0, 0.0, 1.0]).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
    }
}

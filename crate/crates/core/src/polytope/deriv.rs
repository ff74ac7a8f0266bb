use alloc::vec::Vec;

use num_traits::Float;

use super::facets::{active_facets, facet_measures_of, FacetMeasureTable};
use super::fan::IsomorphicPair;
use crate::error::{ensure, Result};
use crate::measures::Density;

/// Bisection tolerance for combinatorial type changes.
pub const TYPE_CHANGE_TOL: f64 = 1e-10;

/// `d/dλ μ(K_λ)` from the facet formula.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    pub lambda: f64,
    pub value: f64,
    pub stderr: f64,
    /// The facet structure differs on the two sides of `λ`; the value is
    /// still the formula at `λ`, which is continuous across the change.
    pub type_change: bool,
    pub facets: FacetMeasureTable,
}

/// `Σ h_i s_i b_i(λ) μ_{n-1}(F_i(K_λ))`.
pub fn measure_derivative(pair: &IsomorphicPair, lambda: f64, density: &Density) -> Result<DerivativeReport> {
    let ih = pair.interp_heights(lambda)?;
    let normals = pair.fan.normals();
    let facets = facet_measures_of(normals, &ih.heights, density)?;
    let mut value = 0.0;
    let mut var = 0.0;
    for i in 0..normals.len() {
        let coef = pair.heights_k[i] * pair.s[i] * ih.b[i];
        value += coef * facets.measures[i];
        var += (coef * facets.stderr[i]).powi(2);
    }
    let delta = 1e-7;
    let lo = (lambda - delta).max(0.0);
    let hi = (lambda + delta).min(1.0);
    let type_change = active_at(pair, lo)? != active_at(pair, hi)?;
    Ok(DerivativeReport {
        lambda,
        value,
        stderr: var.sqrt(),
        type_change,
        facets,
    })
}

fn active_at(pair: &IsomorphicPair, lambda: f64) -> Result<Vec<bool>> {
    let h = pair.interp_heights(lambda)?.heights;
    active_facets(pair.fan.normals(), &h)
}

/// Maximal λ-interval on which the set of present facets is constant.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoInterval {
    pub start: f64,
    pub end: f64,
    pub active: Vec<bool>,
}

/// Splits `[0, 1]` where facets appear or vanish; endpoints are located by
/// bisection between grid points to [`TYPE_CHANGE_TOL`].
pub fn strong_isomorphy_probe(pair: &IsomorphicPair, lambda_grid: &[f64]) -> Result<Vec<IsoInterval>> {
    ensure!(
        lambda_grid.iter().all(|l| (0.0..=1.0).contains(l)),
        InvalidInput,
        "λ grid must lie in [0, 1]"
    );
    let mut grid: Vec<f64> = lambda_grid.to_vec();
    grid.push(0.0);
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut cuts = Vec::new();
    for w in grid.windows(2) {
        let (mut a, b) = (w[0], w[1]);
        let mut sa = active_at(pair, a)?;
        let sb = active_at(pair, b)?;
        while sa != sb {
            let (mut lo, mut hi) = (a, b);
            while hi - lo > TYPE_CHANGE_TOL {
                let mid = 0.5 * (lo + hi);
                if active_at(pair, mid)? == sa {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push(0.5 * (lo + hi));
            a = hi;
            sa = active_at(pair, hi)?;
            if hi >= b {
                break;
            }
        }
    }
    let mut edges = alloc::vec![0.0];
    edges.extend(cuts);
    edges.push(1.0);
    let mut out: Vec<IsoInterval> = Vec::new();
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let active = active_at(pair, 0.5 * (w[0] + w[1]))?;
        match out.last_mut() {
            Some(last) if last.active == active => last.end = w[1],
            _ => out.push(IsoInterval {
                start: w[0],
                end: w[1],
                active,
            }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::NormalFan;

    fn octagon_pair(p: f64) -> IsomorphicPair {
        let fan = NormalFan::regular_planar(8).unwrap();
        let hk = (0..8).map(|i| if i % 2 == 0 { 1.0 } else { 1.6 }).collect();
        let hl = (0..8).map(|i| if i % 2 == 0 { 1.0 } else { 1.2 }).collect();
        IsomorphicPair::new(fan, hk, hl, p).unwrap()
    }

    #[test]
    fn octagon_type_change() {
        let pair = octagon_pair(1.0);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let iv = strong_isomorphy_probe(&pair, &grid).unwrap();
        assert_eq!(iv.len(), 2);
        let star = (1.6 - 2f64.sqrt()) / 0.4;
        assert!((iv[0].end - star).abs() < 1e-9);
        assert_eq!(iv[0].active.iter().filter(|a| **a).count(), 4);
        assert_eq!(iv[1].active.iter().filter(|a| **a).count(), 8);
        let d = measure_derivative(&pair, star, &Density::Lebesgue).unwrap();
        assert!(d.type_change);
        assert!(!measure_derivative(&pair, 0.9, &Density::Lebesgue).unwrap().type_change);
    }

    #[test]
    fn dilate_pair_derivative() {
        let fan = NormalFan::regular_planar(4).unwrap();
        let pair = IsomorphicPair::new(fan, alloc::vec![1.0; 4], alloc::vec![2.0; 4], 1.0).unwrap();
        // area of (1 + λ)^2 * 4
        let d = measure_derivative(&pair, 0.0, &Density::Lebesgue).unwrap();
        assert!((d.value - 8.0).abs() < 1e-14);
        let same = IsomorphicPair::new(NormalFan::regular_planar(4).unwrap(), alloc::vec![1.0; 4], alloc::vec![1.0; 4], 0.5)
            .unwrap();
        assert_eq!(measure_derivative(&same, 0.4, &Density::Gaussian).unwrap().value, 0.0);
    }

    #[test]
    fn derivative_continuous_across_type_change() {
        let pair = octagon_pair(1.0);
        let star = (1.6 - 2f64.sqrt()) / 0.4;
        let a = measure_derivative(&pair, star - 1e-9, &Density::Lebesgue).unwrap().value;
        let b = measure_derivative(&pair, star + 1e-9, &Density::Lebesgue).unwrap().value;
        assert!((a - b).abs() < 1e-7);
    }
}

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::bodies::{Body, HPolytope};
use crate::error::{ensure, Result};
use crate::geom::{norm, Direction};

/// Shared outer normals of a family of polytopes, closed under negation.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFan {
    normals: Vec<Direction>,
    antipode: Vec<usize>,
}

impl NormalFan {
    pub fn new(normals: Vec<Direction>) -> Result<Self> {
        ensure!(!normals.is_empty(), InvalidInput, "empty fan");
        let dim = normals[0].dim();
        ensure!(normals.iter().all(|u| u.dim() == dim), InvalidInput, "normals of mixed dimension");
        let mut antipode = Vec::with_capacity(normals.len());
        for u in &normals {
            let m = u.negated();
            let j = normals.iter().position(|v| {
                let d: Vec<f64> = v.iter().zip(m.iter()).map(|(a, b)| a - b).collect();
                norm(&d) < 1e-12
            });
            match j {
                Some(j) => antipode.push(j),
                None => crate::error::bail!(InvalidInput, "fan is not closed under negation"),
            }
        }
        // positively spanning iff unit heights give a bounded polytope
        HPolytope::new(normals.clone(), alloc::vec![1.0; normals.len()])?;
        Ok(NormalFan { normals, antipode })
    }

    /// `count` equally spaced planar normals starting at angle 0; `count` even.
    pub fn regular_planar(count: usize) -> Result<Self> {
        ensure!(count >= 4 && count % 2 == 0, InvalidInput, "need an even count >= 4");
        Self::new(
            (0..count)
                .map(|k| Direction::from_angle(2.0 * PI * k as f64 / count as f64))
                .collect(),
        )
    }

    pub fn normals(&self) -> &[Direction] {
        &self.normals
    }

    pub fn dim(&self) -> usize {
        self.normals[0].dim()
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    /// Heights of `k` on the fan.
    pub fn heights_of(&self, k: &Body) -> Result<Vec<f64>> {
        ensure!(k.dim() == self.dim(), InvalidInput, "body and fan differ in dimension");
        Ok(self.normals.iter().map(|u| k.support(u)).collect())
    }

    /// Whether each normal is `±e_j` for some axis.
    pub fn is_axis_aligned(&self) -> bool {
        self.normals
            .iter()
            .all(|u| u.iter().filter(|c| c.abs() > 1e-15).count() == 1)
    }
}

/// Heights and derived factors of the interpolated polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpHeights {
    pub heights: Vec<f64>,
    /// `(1 + λ p s_i)^{1/p}`.
    pub a: Vec<f64>,
    /// `(1 + λ p s_i)^{(1-p)/p}`.
    pub b: Vec<f64>,
    /// `(1 + λ p s_i)^{(1-2p)/p}`.
    pub c: Vec<f64>,
}

/// Two polytopes on a common fan, interpolated in the `L_p` sense so that
/// `λ = 0` gives `K` and `λ = 1` gives `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsomorphicPair {
    pub fan: NormalFan,
    pub heights_k: Vec<f64>,
    pub heights_l: Vec<f64>,
    pub p: f64,
    /// `h_L = h_K (1 + p s)^{1/p}`; `s = log(h_L / h_K)` when `p = 0`.
    pub s: Vec<f64>,
}

impl IsomorphicPair {
    pub fn new(fan: NormalFan, heights_k: Vec<f64>, heights_l: Vec<f64>, p: f64) -> Result<Self> {
        ensure!(
            heights_k.len() == fan.len() && heights_l.len() == fan.len(),
            InvalidInput,
            "heights do not match the fan"
        );
        ensure!((0.0..=1.0).contains(&p), InvalidInput, "p must lie in [0, 1], got {p}");
        ensure!(
            heights_k.iter().chain(&heights_l).all(|h| h.is_finite() && *h > 0.0),
            Domain,
            "heights must be positive"
        );
        let s = heights_k
            .iter()
            .zip(&heights_l)
            .map(|(k, l)| {
                let r = (l / k).ln();
                if p == 0.0 {
                    r
                } else {
                    (p * r).exp_m1() / p
                }
            })
            .collect();
        Ok(IsomorphicPair {
            fan,
            heights_k,
            heights_l,
            p,
            s,
        })
    }

    pub fn from_bodies(fan: NormalFan, k: &Body, l: &Body, p: f64) -> Result<Self> {
        let hk = fan.heights_of(k)?;
        let hl = fan.heights_of(l)?;
        Self::new(fan, hk, hl, p)
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn interp_heights(&self, lambda: f64) -> Result<InterpHeights> {
        ensure!((0.0..=1.0).contains(&lambda), InvalidInput, "λ must lie in [0, 1], got {lambda}");
        let p = self.p;
        let n = self.s.len();
        let (mut a, mut b, mut c) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for s in &self.s {
            if p == 0.0 {
                let e = (lambda * s).exp();
                a.push(e);
                b.push(e);
                c.push(e);
            } else {
                let base = 1.0 + lambda * p * s;
                ensure!(base > 0.0, Domain, "nonpositive interpolation base {base}");
                let lg = (lambda * p * s).ln_1p();
                a.push((lg / p).exp());
                b.push((lg * (1.0 - p) / p).exp());
                c.push((lg * (1.0 - 2.0 * p) / p).exp());
            }
        }
        let heights = self.heights_k.iter().zip(&a).map(|(h, a)| h * a).collect();
        Ok(InterpHeights { heights, a, b, c })
    }

    /// `K_λ` as a body.
    pub fn body_at(&self, lambda: f64) -> Result<Body> {
        let h = self.interp_heights(lambda)?.heights;
        Body::polytope(self.fan.normals().to_vec(), h)
    }
}

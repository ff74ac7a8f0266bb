#![allow(dead_code)]

use core::f64::consts::PI;

use pqbm_core::bodies::{Body, Family};
use pqbm_core::geom::Direction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Origin-symmetric polygon with `pairs` random normal pairs plus the axes.
pub fn random_polygon(rng: &mut ChaCha8Rng, pairs: usize, lo: f64, hi: f64) -> Body {
    let mut normals = Vec::new();
    let mut heights = Vec::new();
    let base = rng.random_range(0.0..PI);
    for j in 0..pairs {
        let t = base + PI * (j as f64 + rng.random_range(0.1..0.9)) / pairs as f64;
        let h = rng.random_range(lo..hi);
        let u = Direction::from_angle(t);
        normals.push(u.negated());
        normals.push(u);
        heights.push(h);
        heights.push(h);
    }
    Body::polytope(normals, heights).unwrap()
}

/// A symmetric catalog body in dimension `n` with inradius at least `min_r`.
pub fn random_body(rng: &mut ChaCha8Rng, n: usize, min_r: f64) -> Body {
    let span = |rng: &mut ChaCha8Rng| min_r * rng.random_range(1.0..1.8);
    let kind = rng.random_range(0..if n == 2 { 6 } else { 5 });
    match kind {
        0 => Body::ball(n, span(rng)).unwrap(),
        1 => Body::cube(&(0..n).map(|_| span(rng)).collect::<Vec<_>>()).unwrap(),
        2 => Body::ellipsoid(&(0..n).map(|_| span(rng)).collect::<Vec<_>>()).unwrap(),
        3 => {
            let q = rng.random_range(1.5..6.0);
            // inradius of the l_q ball is scale * n^{min(0, 1/2 - 1/q)}
            let s = span(rng) * (n as f64).powf((1.0f64 / q - 0.5).max(0.0));
            Body::from_family(Family::lq_ball(n, q, s).unwrap()).unwrap()
        }
        4 => Body::from_family(Family::cross_polytope(n, span(rng) * (n as f64).sqrt()).unwrap()).unwrap(),
        _ => {
            let pairs = rng.random_range(3..7);
            random_polygon(rng, pairs, min_r, min_r * 1.8)
        }
    }
}

pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Direction {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s: f64 = v.iter().map(|x| x * x).sum();
        if s > 1e-4 && s <= 1.0 {
            return Direction::normalized(&v).unwrap();
        }
    }
}

//! Joint Monte Carlo over several bodies with common random numbers.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use num_traits::Float;

use super::density::Density;
use super::exec::{Estimator, CHUNK, MIN_BUDGET};
use crate::bodies::Body;
use crate::error::{ensure, Result};
use crate::geom::MAX_DIM;

/// Observables evaluated at a sample point; writes one value per slot.
pub type ObservableFn<'a> = &'a (dyn Fn(&[f64], &mut [f64]) + Sync);

/// Sample means and their covariance for the feature vector
/// `(w 1_K, w 1_K o_1, ..., w 1_K o_m)` repeated for each body.
#[derive(Clone, Debug, PartialEq)]
pub struct JointSample {
    pub mean: Vec<f64>,
    /// Row-major covariance of `mean` (already divided by the sample count).
    pub cov: Vec<f64>,
    pub samples: u64,
    pub width: usize,
}

impl JointSample {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn cov_at(&self, i: usize, j: usize) -> f64 {
        self.cov[i * self.mean.len() + j]
    }
}

pub(crate) fn joint_mc(
    bodies: &[&Body],
    density: &Density,
    n_obs: usize,
    obs: ObservableFn<'_>,
    est: &Estimator<'_>,
) -> Result<JointSample> {
    ensure!(!bodies.is_empty(), InvalidInput, "no bodies to sample");
    ensure!(
        est.budget >= MIN_BUDGET,
        InvalidInput,
        "Monte Carlo budget {} below the minimum {MIN_BUDGET}",
        est.budget
    );
    let n = bodies[0].dim();
    ensure!(bodies.iter().all(|b| b.dim() == n), InvalidInput, "bodies of mixed dimension");
    for b in bodies {
        ensure!(b.inradius() > 0.0, Domain, "body has empty interior");
        ensure!(b.extents().iter().all(|e| e.is_finite()), Domain, "body is unbounded");
    }
    let width = 1 + n_obs;
    let d = bodies.len() * width;
    let gaussian = matches!(density, Density::Gaussian);
    let mut half = [0.0; MAX_DIM];
    for b in bodies {
        for (h, e) in half.iter_mut().zip(b.extents()) {
            *h = h.max(*e);
        }
    }
    let box_volume: f64 = half[..n].iter().map(|h| 2.0 * h).product();
    let chunks = est.budget.div_ceil(CHUNK) as usize;
    let seed = est.seed;
    let budget = est.budget;
    let job = |c: usize| -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = CHUNK.min(budget - c as u64 * CHUNK);
        let mut acc = alloc::vec![0.0; d + d * d];
        let mut x = [0.0; MAX_DIM];
        let mut o = alloc::vec![0.0; n_obs];
        let mut f = alloc::vec![0.0; d];
        for _ in 0..count {
            let w = if gaussian {
                for xi in x.iter_mut().take(n) {
                    *xi = rng.sample(StandardNormal);
                }
                1.0
            } else {
                for (xi, h) in x.iter_mut().zip(&half).take(n) {
                    *xi = (2.0 * rng.random::<f64>() - 1.0) * h;
                }
                box_volume * density.weight(&x[..n])
            };
            let mut any = false;
            let mut have_obs = false;
            for (k, b) in bodies.iter().enumerate() {
                let base = k * width;
                if b.contains_point(&x[..n]) {
                    if !have_obs && n_obs > 0 {
                        obs(&x[..n], &mut o);
                        have_obs = true;
                    }
                    f[base] = w;
                    for j in 0..n_obs {
                        f[base + 1 + j] = w * o[j];
                    }
                    any = true;
                } else {
                    f[base..base + width].fill(0.0);
                }
            }
            if !any {
                continue;
            }
            for i in 0..d {
                let fi = f[i];
                if fi == 0.0 {
                    continue;
                }
                acc[i] += fi;
                let row = &mut acc[d + i * d..d + (i + 1) * d];
                for (r, fj) in row.iter_mut().zip(&f) {
                    *r += fi * fj;
                }
            }
        }
        acc
    };
    let parts = est.executor.run(chunks, &job);
    let mut total = alloc::vec![0.0; d + d * d];
    for p in parts {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let nf = budget as f64;
    let mean: Vec<f64> = total[..d].iter().map(|s| s / nf).collect();
    let mut cov = alloc::vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let s = total[d + i * d + j];
            cov[i * d + j] = (s - nf * mean[i] * mean[j]) / ((nf - 1.0) * nf);
        }
    }
    Ok(JointSample {
        mean,
        cov,
        samples: budget,
        width,
    })
}

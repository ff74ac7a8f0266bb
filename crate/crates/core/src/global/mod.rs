//! Global (p,q) inequality checks: midpoint deficits, concavity sweeps,
//! dilates, and the Gaussian moment bounds used for dilates.

use alloc::vec::Vec;

use num_traits::Float;

use crate::bodies::{p_combine, wulff, Body};
use crate::error::{bail, ensure, Result};
use crate::geom::norm_sq;
use crate::measures::{closed_form, joint_mc, measure, restricted_means, Density, Estimator, Method};

/// Relative floor on uncertainties, so that exact arithmetic still gets a
/// rounding-sized band.
pub const NUMERIC_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    /// Holds when `value >= -3σ`, fails when `value < -3σ` and `|value| > 10σ`.
    pub fn classify(value: f64, stderr: f64) -> Self {
        if value >= -3.0 * stderr {
            Verdict::Holds
        } else if value.abs() > 10.0 * stderr {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

fn effective(stderr: f64, scale: f64) -> f64 {
    stderr.max(NUMERIC_FLOOR * scale.abs().max(1.0))
}

/// Measures of several bodies with their joint covariance.
#[derive(Clone, Debug, PartialEq)]
pub struct JointMeasures {
    pub values: Vec<f64>,
    /// Row-major covariance.
    pub cov: Vec<f64>,
    pub method: Method,
    pub budget: u64,
    pub seed: Option<u64>,
}

/// `Auto` uses closed forms when every body has one and Monte Carlo with
/// common random numbers otherwise.
pub fn joint_measures(bodies: &[&Body], density: &Density, est: &Estimator<'_>) -> Result<JointMeasures> {
    let d = bodies.len();
    let exact: Option<Vec<f64>> = bodies.iter().map(|b| closed_form(b, density)).collect();
    match (est.method, exact) {
        (Method::Auto | Method::ClosedForm, Some(values)) => Ok(JointMeasures {
            values,
            cov: alloc::vec![0.0; d * d],
            method: Method::ClosedForm,
            budget: 0,
            seed: None,
        }),
        (Method::ClosedForm, None) => bail!(Unsupported, "closed form unavailable for some body"),
        (Method::PolarQuadrature, _) => {
            let mut values = Vec::with_capacity(d);
            let mut cov = alloc::vec![0.0; d * d];
            let mut budget = 0;
            for (i, b) in bodies.iter().enumerate() {
                let m = measure(b, density, est)?;
                values.push(m.value);
                cov[i * d + i] = m.stderr * m.stderr;
                budget += m.budget;
            }
            Ok(JointMeasures {
                values,
                cov,
                method: Method::PolarQuadrature,
                budget,
                seed: None,
            })
        }
        _ => {
            let s = joint_mc(bodies, density, 0, &|_, _| {}, est)?;
            Ok(JointMeasures {
                values: s.mean,
                cov: s.cov,
                method: Method::MonteCarlo,
                budget: s.samples,
                seed: Some(est.seed),
            })
        }
    }
}

fn phi(m: f64, q: f64, n: usize) -> Result<(f64, f64)> {
    ensure!(m > 0.0, Numeric, "nonpositive measure estimate {m}");
    if q == 0.0 {
        Ok((m.ln(), 1.0 / m))
    } else {
        let e = q / n as f64;
        Ok((m.powf(e), e * m.powf(e - 1.0)))
    }
}

fn quad_form(g: &[f64], cov: &[f64]) -> f64 {
    let d = g.len();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            s += g[i] * cov[i * d + j] * g[j];
        }
    }
    s.max(0.0)
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    ensure!(
        (0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q),
        InvalidInput,
        "p and q must lie in [0, 1]"
    );
    ensure!(q <= p, InvalidInput, "need q <= p (got p = {p}, q = {q})");
    Ok(())
}

/// Midpoint deficit of the (p,q) inequality with uncertainty.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub density: Density,
    pub method: Method,
    pub budget: u64,
    pub seed: Option<u64>,
    pub mu_k: f64,
    pub mu_l: f64,
    pub mu_m: f64,
    /// `φ(M) - λ φ(K) - (1-λ) φ(L)` with `φ = μ^{q/n}`, or `log μ` at `q = 0`.
    pub deficit: f64,
    pub stderr: f64,
    pub verdict: Verdict,
}

/// `λ` weights `K`: `M = λK +_p (1-λ)L`.
pub fn midpoint_check(
    k: &Body,
    l: &Body,
    lambda: f64,
    p: f64,
    q: f64,
    density: &Density,
    est: &Estimator<'_>,
) -> Result<InequalityReport> {
    check_pq(p, q)?;
    let m = wulff(&p_combine(k, l, lambda, p)?)?;
    let j = joint_measures(&[k, l, &m], density, est)?;
    let n = k.dim();
    let (fk, dk) = phi(j.values[0], q, n)?;
    let (fl, dl) = phi(j.values[1], q, n)?;
    let (fm, dm) = phi(j.values[2], q, n)?;
    let deficit = if lambda == 1.0 || lambda == 0.0 {
        0.0
    } else {
        lambda * (fm - fk) + (1.0 - lambda) * (fm - fl)
    };
    let g = [-lambda * dk, -(1.0 - lambda) * dl, dm];
    let stderr = quad_form(&g, &j.cov).sqrt();
    let scale = fk.abs().max(fl.abs()).max(fm.abs());
    Ok(InequalityReport {
        lambda,
        p,
        q,
        density: *density,
        method: j.method,
        budget: j.budget,
        seed: j.seed,
        mu_k: j.values[0],
        mu_l: j.values[1],
        mu_m: j.values[2],
        deficit,
        stderr,
        verdict: Verdict::classify(deficit, effective(stderr, scale)),
    })
}

/// `φ(λ)` on a grid and its second differences.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub lambdas: Vec<f64>,
    pub measures: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_stderr: Vec<f64>,
    /// `φ(λ-δ) - 2φ(λ) + φ(λ+δ)` at each interior grid point.
    pub second_differences: Vec<f64>,
    pub second_stderr: Vec<f64>,
    /// Concave when every second difference is `<= 3σ`.
    pub concave: bool,
    pub method: Method,
    pub budget: u64,
    pub seed: Option<u64>,
}

impl SweepReport {
    pub fn max_second_difference(&self) -> f64 {
        self.second_differences.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Minimum number of grid points in a sweep.
pub const MIN_SWEEP_POINTS: usize = 5;

/// `φ(λ) = μ(λK +_p (1-λ)L)^{q/n}` (log at `q = 0`); all cells share one
/// set of random numbers.
pub fn concavity_sweep(
    k: &Body,
    l: &Body,
    p: f64,
    q: f64,
    density: &Density,
    lambda_grid: &[f64],
    est: &Estimator<'_>,
) -> Result<SweepReport> {
    check_pq(p, q)?;
    let m = lambda_grid.len();
    ensure!(m >= MIN_SWEEP_POINTS, InvalidInput, "a sweep needs at least {MIN_SWEEP_POINTS} λ values");
    let step = lambda_grid[1] - lambda_grid[0];
    ensure!(step > 0.0, InvalidInput, "λ grid must be increasing");
    for w in lambda_grid.windows(2) {
        ensure!(
            ((w[1] - w[0]) - step).abs() <= 1e-9 * step.max(1.0),
            InvalidInput,
            "λ grid must be equally spaced"
        );
    }
    let bodies: Vec<Body> = lambda_grid
        .iter()
        .map(|lam| wulff(&p_combine(k, l, *lam, p)?))
        .collect::<Result<_>>()?;
    let refs: Vec<&Body> = bodies.iter().collect();
    let j = joint_measures(&refs, density, est)?;
    let n = k.dim();
    let mut phi_v = Vec::with_capacity(m);
    let mut dphi = Vec::with_capacity(m);
    for v in &j.values {
        let (f, d) = phi(*v, q, n)?;
        phi_v.push(f);
        dphi.push(d);
    }
    let phi_stderr = (0..m).map(|i| (dphi[i] * dphi[i] * j.cov[i * m + i]).max(0.0).sqrt()).collect();
    let mut second = Vec::with_capacity(m - 2);
    let mut second_se = Vec::with_capacity(m - 2);
    let mut concave = true;
    for i in 1..m - 1 {
        let d = phi_v[i - 1] - 2.0 * phi_v[i] + phi_v[i + 1];
        let mut g = alloc::vec![0.0; m];
        g[i - 1] = dphi[i - 1];
        g[i] = -2.0 * dphi[i];
        g[i + 1] = dphi[i + 1];
        let se = quad_form(&g, &j.cov).sqrt();
        let scale = phi_v[i].abs();
        if d > 3.0 * effective(se, scale) {
            concave = false;
        }
        second.push(d);
        second_se.push(se);
    }
    Ok(SweepReport {
        lambdas: lambda_grid.to_vec(),
        measures: j.values,
        phi: phi_v,
        phi_stderr,
        second_differences: second,
        second_stderr: second_se,
        concave,
        method: j.method,
        budget: j.budget,
        seed: j.seed,
    })
}

/// Sweep for `L = tK` with `q = p` under the Gaussian measure.
pub fn dilates_check(
    k: &Body,
    t: f64,
    p: f64,
    density: &Density,
    lambda_grid: &[f64],
    est: &Estimator<'_>,
) -> Result<SweepReport> {
    ensure!(
        *density == Density::Gaussian,
        InvalidInput,
        "the dilates check is stated for the Gaussian measure only"
    );
    ensure!(t.is_finite() && t > 0.0, InvalidInput, "dilation factor must be positive");
    ensure!(
        k.is_symmetric(),
        InvalidInput,
        "K must be origin-symmetric (barycentre at the origin)"
    );
    let l = k.scaled(t)?;
    concavity_sweep(k, &l, p, p, density, lambda_grid, est)
}

/// `2E|x|² - Var|x|²` under the Gaussian restricted to `K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentReport {
    pub m2: f64,
    pub m4: f64,
    pub variance: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    pub stderr: f64,
    pub verdict: Verdict,
}

fn moments(k: &Body, density: &Density, est: &Estimator<'_>) -> Result<(f64, f64, [f64; 4])> {
    let f = |x: &[f64], o: &mut [f64]| {
        let r2 = norm_sq(x);
        o[0] = r2;
        o[1] = r2 * r2;
    };
    let r = restricted_means(k, density, 2, &f, est)?;
    Ok((r.means[0], r.means[1], [r.cov[0], r.cov[1], r.cov[2], r.cov[3]]))
}

fn gaussian_symmetric(k: &Body, density: &Density) -> Result<()> {
    ensure!(*density == Density::Gaussian, InvalidInput, "this check is for the Gaussian measure");
    ensure!(k.is_symmetric(), InvalidInput, "K must be origin-symmetric");
    Ok(())
}

fn moment_report(m2: f64, m4: f64, lhs: f64, rhs: f64, g: [f64; 2], cov: [f64; 4]) -> MomentReport {
    let margin = lhs - rhs;
    let stderr = quad_form(&g, &cov).sqrt();
    MomentReport {
        m2,
        m4,
        variance: m4 - m2 * m2,
        lhs,
        rhs,
        margin,
        stderr,
        verdict: Verdict::classify(margin, effective(stderr, lhs.abs().max(rhs.abs()))),
    }
}

/// `Var|x|² <= 2 E|x|²`; `lhs` is the bound, `rhs` the variance.
pub fn cfm_moment_check(k: &Body, density: &Density, est: &Estimator<'_>) -> Result<MomentReport> {
    gaussian_symmetric(k, density)?;
    let (m2, m4, cov) = moments(k, density, est)?;
    let var = m4 - m2 * m2;
    Ok(moment_report(m2, m4, 2.0 * m2, var, [2.0 + 2.0 * m2, -1.0], cov))
}

/// `n + E|x|² >= Var|x|² + (p/n)(n - E|x|²)² + (1-p)(n - E|x|²)`.
pub fn dilates_local_check(k: &Body, p: f64, density: &Density, est: &Estimator<'_>) -> Result<MomentReport> {
    gaussian_symmetric(k, density)?;
    ensure!((0.0..=1.0).contains(&p), InvalidInput, "p must lie in [0, 1]");
    let n = k.dim() as f64;
    let (m2, m4, cov) = moments(k, density, est)?;
    let var = m4 - m2 * m2;
    let d = n - m2;
    let lhs = n + m2;
    let rhs = var + p / n * d * d + (1.0 - p) * d;
    let g = [1.0 + 2.0 * m2 + 2.0 * p / n * d + (1.0 - p), -1.0];
    Ok(moment_report(m2, m4, lhs, rhs, g, cov))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bands() {
        assert_eq!(Verdict::classify(-0.2, 0.1), Verdict::Holds);
        assert_eq!(Verdict::classify(-0.5, 0.1), Verdict::Inconclusive);
        assert_eq!(Verdict::classify(-1.1, 0.1), Verdict::Fails);
    }

    #[test]
    fn equal_bodies_and_endpoints() {
        let k = Body::cube(&[1.0, 0.5]).unwrap();
        let e = Estimator::default();
        let r = midpoint_check(&k, &k, 0.5, 0.5, 0.5, &Density::Lebesgue, &e).unwrap();
        assert_eq!(r.deficit, 0.0);
        let l = Body::ball(2, 1.0).unwrap();
        let r = midpoint_check(&k, &l, 1.0, 1.0, 0.0, &Density::Gaussian, &e).unwrap();
        assert_eq!(r.deficit, 0.0);
        assert!(midpoint_check(&k, &l, 0.5, 0.5, 0.6, &Density::Gaussian, &e).is_err());
    }

    #[test]
    fn balls_equality_by_homogeneity() {
        let (a, b) = (Body::ball(2, 1.0).unwrap(), Body::ball(2, 2.5).unwrap());
        for p in [0.0, 0.5, 1.0] {
            let r = midpoint_check(&a, &b, 0.3, p, p, &Density::Lebesgue, &Estimator::default()).unwrap();
            assert!(r.deficit.abs() < 1e-12, "{}", r.deficit);
            assert_eq!(r.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn full_space_moment_equalities() {
        let k = Body::ball(2, 1e3).unwrap();
        let e = Estimator::default();
        let c = cfm_moment_check(&k, &Density::Gaussian, &e).unwrap();
        assert!((c.variance - 4.0).abs() < 1e-7 && c.margin.abs() < 1e-7);
        let d = dilates_local_check(&k, 1.0, &Density::Gaussian, &e).unwrap();
        assert!((d.lhs - 4.0).abs() < 1e-8 && d.margin.abs() < 1e-7);
        assert!(cfm_moment_check(&k, &Density::Lebesgue, &e).is_err());
    }

    #[test]
    fn ball_dilates_closed_form() {
        let k = Body::ball(2, 1.0).unwrap();
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let r = dilates_check(&k, 3.0, 1.0, &Density::Gaussian, &grid, &Estimator::default()).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        for (lam, f) in grid.iter().zip(&r.phi) {
            let rad = 3.0 - 2.0 * lam;
            let exact = (1.0 - (-rad * rad / 2.0f64).exp()).sqrt();
            assert!((f - exact).abs() < 1e-12);
        }
        assert!(r.concave);
    }

    #[test]
    fn sweep_grid_validation() {
        let k = Body::ball(2, 1.0).unwrap();
        let e = Estimator::default();
        assert!(concavity_sweep(&k, &k, 1.0, 0.0, &Density::Lebesgue, &[0.0, 0.5, 1.0], &e).is_err());
        assert!(concavity_sweep(&k, &k, 1.0, 0.0, &Density::Lebesgue, &[0.0, 0.1, 0.5, 0.7, 1.0], &e).is_err());
    }
}

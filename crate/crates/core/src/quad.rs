//! One-dimensional quadrature and a few special functions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Kronrod error estimate summed over the final partition.
    pub error: f64,
    pub converged: bool,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol·|I|)` or 4000 panels are used.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Integral {
    if a == b {
        return Integral {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if panels.len() >= 4000 {
            return Integral {
                value: total,
                error: err,
                converged: false,
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (pa, pb, pv, pe) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // panel cannot be split any further in floating point
            panels.push((pa, pb, pv, pe));
            return Integral {
                value: total,
                error: err,
                converged: false,
            };
        }
        let (lv, le) = gk15(&mut f, pa, mid);
        let (rv, re) = gk15(&mut f, mid, pb);
        total += lv + rv - pv;
        err += le + re - pe;
        panels.push((pa, mid, lv, le));
        panels.push((mid, pb, rv, re));
        // refresh sums occasionally to keep cancellation drift out of `err`
        if panels.len() % 64 == 0 {
            total = panels.iter().map(|p| p.2).sum();
            err = panels.iter().map(|p| p.3).sum();
        }
    }
    Integral {
        value: panels.iter().map(|p| p.2).sum(),
        error: err,
        converged: true,
    }
}

fn gk15_vec<F: FnMut(f64, &mut [f64])>(f: &mut F, a: f64, b: f64, buf: &mut [f64], val: &mut [f64], err: &mut [f64]) {
    let m = val.len();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut gauss = alloc::vec![0.0; m];
    f(center, buf);
    for k in 0..m {
        val[k] = buf[k] * WGK[7];
        gauss[k] = buf[k] * WG[3];
    }
    let mut other = alloc::vec![0.0; m];
    for j in 0..7 {
        let dx = half * XGK[j];
        f(center - dx, buf);
        f(center + dx, &mut other);
        for k in 0..m {
            let s = buf[k] + other[k];
            val[k] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * s;
            }
        }
    }
    for k in 0..m {
        err[k] = ((val[k] - gauss[k]) * half).abs();
        val[k] *= half;
    }
}

/// Vector-valued variant of [`integrate`]: `f(x, out)` fills `m` integrands.
///
/// Every component must meet `max(abs_tol, rel_tol·S_k)` where `S_k` sums the
/// absolute panel contributions, so cancelling components still terminate.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    m: usize,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> (Vec<f64>, Vec<f64>, bool) {
    if a == b {
        return (alloc::vec![0.0; m], alloc::vec![0.0; m], true);
    }
    struct Panel {
        a: f64,
        b: f64,
        val: Vec<f64>,
        err: Vec<f64>,
    }
    let mut buf = alloc::vec![0.0; m];
    let eval = |f: &mut F, a: f64, b: f64, buf: &mut [f64]| {
        let mut val = alloc::vec![0.0; m];
        let mut err = alloc::vec![0.0; m];
        gk15_vec(f, a, b, buf, &mut val, &mut err);
        Panel { a, b, val, err }
    };
    let mut panels = alloc::vec![eval(&mut f, a, b, &mut buf)];
    let mut converged = true;
    loop {
        let mut total = alloc::vec![0.0; m];
        let mut mag = alloc::vec![0.0; m];
        let mut err = alloc::vec![0.0; m];
        for p in &panels {
            for k in 0..m {
                total[k] += p.val[k];
                mag[k] += p.val[k].abs();
                err[k] += p.err[k];
            }
        }
        // panel magnitudes give a scale for components that cancel to ~0
        let tol: Vec<f64> = mag.iter().map(|t| abs_tol.max(rel_tol * t)).collect();
        if (0..m).all(|k| err[k] <= tol[k]) {
            return (total, err, converged);
        }
        if panels.len() >= 4000 {
            converged = false;
            return (total, err, converged);
        }
        let score = |p: &Panel| (0..m).map(|k| p.err[k] / tol[k]).fold(0.0, f64::max);
        let worst = (0..panels.len())
            .max_by(|&i, &j| score(&panels[i]).total_cmp(&score(&panels[j])))
            .unwrap_or(0);
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            panels.push(p);
            converged = false;
            let mut total = alloc::vec![0.0; m];
            let mut err = alloc::vec![0.0; m];
            for p in &panels {
                for k in 0..m {
                    total[k] += p.val[k];
                    err[k] += p.err[k];
                }
            }
            return (total, err, converged);
        }
        panels.push(eval(&mut f, p.a, mid, &mut buf));
        panels.push(eval(&mut f, mid, p.b, &mut buf));
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on<F: FnMut(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

/// Gaussian mass of the interval [-a, a] in one dimension.
pub fn normal_interval_mass(a: f64) -> f64 {
    libm::erf(a / core::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Lebesgue volume of the unit ball B_2^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    PI.powf(h) / libm::tgamma(h + 1.0)
}

/// (n-1)-dimensional area of the unit sphere S^{n-1}.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

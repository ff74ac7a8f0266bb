//! Sufficient conditions for the (p,q) inequality as explicit slacks, and a
//! numerical estimate of the Poincaré constant they depend on.

mod poincare;

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{ensure, Result};

pub use poincare::{poincare_estimate, PoincareReport};

/// Parameters shared by all condition evaluators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionInput {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    /// Inradius.
    pub r: f64,
    /// Circumradius, for the variant that uses it.
    pub big_r: Option<f64>,
    /// Lower bound on `∇²V`.
    pub k1: f64,
    /// Bound on the average Laplacian of `V` divided by `n`.
    pub k2: f64,
    /// Poincaré constant `C_poin`.
    pub c_poin: Option<f64>,
}

impl ConditionInput {
    /// Standard Gaussian: `k1 = k2 = 1`.
    pub fn gaussian(n: usize, p: f64, q: f64, r: f64) -> Self {
        ConditionInput {
            n,
            p,
            q,
            r,
            big_r: None,
            k1: 1.0,
            k2: 1.0,
            c_poin: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.n >= 1, InvalidInput, "dimension must be positive");
        ensure!(
            (0.0..=1.0).contains(&self.q) && (0.0..=1.0).contains(&self.p) && self.q <= self.p,
            InvalidInput,
            "need 0 <= q <= p <= 1 (got p = {}, q = {})",
            self.p,
            self.q
        );
        ensure!(self.r.is_finite() && self.r > 0.0, InvalidInput, "inradius must be positive");
        ensure!(
            self.k1.is_finite() && self.k2.is_finite() && self.k1 >= 0.0 && self.k2 >= 0.0,
            InvalidInput,
            "k1 and k2 must be nonnegative"
        );
        if let Some(c) = self.c_poin {
            ensure!(c.is_finite() && c > 0.0, InvalidInput, "Poincaré constant must be positive");
        }
        if let Some(big) = self.big_r {
            ensure!(big.is_finite() && big >= self.r, InvalidInput, "circumradius must be >= inradius");
        }
        Ok(())
    }
}

/// One displayed inequality written as `rhs - lhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Component {
    pub id: &'static str,
    pub slack: f64,
    /// Whether the hypotheses of this inequality hold for the input.
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionVerdict {
    pub satisfied: bool,
    /// Identifier of the best applicable branch.
    pub branch: &'static str,
    /// Slack of that branch (the minimum over its inequalities).
    pub slack: f64,
    /// False when the input is outside the evaluator's hypotheses.
    pub in_hypothesis: bool,
    pub components: Vec<Component>,
}

impl ConditionVerdict {
    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }
}

/// Groups of components; a branch holds when all of its components do.
fn decide(components: Vec<Component>, branches: &[(&'static str, &[&'static str])], in_hypothesis: bool) -> ConditionVerdict {
    let mut best: Option<(&'static str, f64)> = None;
    for (name, ids) in branches {
        let parts: Vec<&Component> = components.iter().filter(|c| ids.contains(&c.id)).collect();
        if parts.is_empty() || parts.iter().any(|c| !c.applicable) {
            continue;
        }
        let s = parts.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((name, s));
        }
    }
    let (branch, slack) = best.unwrap_or(("none", f64::NEG_INFINITY));
    ConditionVerdict {
        satisfied: slack >= 0.0,
        branch,
        slack,
        in_hypothesis,
        components,
    }
}

pub const MAIN_BRANCH_1: &str = "main/linear";
pub const MAIN_BRANCH_2A: &str = "main/quadratic";
pub const MAIN_BRANCH_2B: &str = "main/quadratic-side";

/// Slack `2k1 - (1-p)(1+n)/r² - q(1+k2)(1+k1)` of the single-line condition.
pub fn main_linear_slack(c: &ConditionInput) -> f64 {
    let n = c.n as f64;
    2.0 * c.k1 - (1.0 - c.p) * (1.0 + n) / (c.r * c.r) - c.q * (1.0 + c.k2) * (1.0 + c.k1)
}

/// Two-inequality alternative in `θ = (1-p)/r²`.
pub fn main_quadratic_slacks(c: &ConditionInput) -> (f64, f64) {
    let n = c.n as f64;
    let t = (1.0 - c.p) / (c.r * c.r);
    let (k1, k2) = (c.k1, c.k2);
    let a = k1 * k1 + n * t * t - t * (n + 1.0) * k1 - c.q * (k1 * k1 + k1 * k2 - (n * k1 + k2) * t);
    let b = k1 / n - t;
    (a, b)
}

/// Both branches of the main sufficient condition.
pub fn theorem_main_check(c: &ConditionInput) -> Result<ConditionVerdict> {
    c.validate()?;
    let n = c.n as f64;
    let (a, b) = main_quadratic_slacks(c);
    let comps = alloc::vec![
        Component {
            id: MAIN_BRANCH_1,
            slack: main_linear_slack(c),
            applicable: c.k1 >= 1.0 / n && c.k1 <= 1.0,
        },
        Component {
            id: MAIN_BRANCH_2A,
            slack: a,
            applicable: true,
        },
        Component {
            id: MAIN_BRANCH_2B,
            slack: b,
            applicable: true,
        },
    ];
    Ok(decide(
        comps,
        &[(MAIN_BRANCH_1, &[MAIN_BRANCH_1]), ("main/quadratic-system", &[MAIN_BRANCH_2A, MAIN_BRANCH_2B])],
        c.k1 > 0.0,
    ))
}

pub const PROP_INCLUSION: &str = "inclusion";

/// `2k1 - (1-p)(2√n√(1+k2)√(1+k1) + √k1)/(2r) - q(1+k2)(1+k1)`.
pub fn prop_main_check(c: &ConditionInput) -> Result<ConditionVerdict> {
    c.validate()?;
    let n = c.n as f64;
    let lhs = (1.0 - c.p) * (2.0 * n.sqrt() * (1.0 + c.k2).sqrt() * (1.0 + c.k1).sqrt() + c.k1.sqrt()) / (2.0 * c.r)
        + c.q * (1.0 + c.k2) * (1.0 + c.k1);
    let comps = alloc::vec![Component {
        id: PROP_INCLUSION,
        slack: 2.0 * c.k1 - lhs,
        applicable: true,
    }];
    Ok(decide(comps, &[(PROP_INCLUSION, &[PROP_INCLUSION])], c.k1 <= 1.0 && c.k1 > 0.0))
}

pub const POIN_SIDE: &str = "poincare/side";
pub const POIN_MAIN: &str = "poincare/main";
pub const POIN_RADIUS_MAIN: &str = "poincare-radius/main";
pub const POIN_RADIUS_SIDE: &str = "poincare-radius/side";
pub const POIN_INCL_MAIN: &str = "poincare-inclusion/main";
pub const POIN_INCL_SIDE: &str = "poincare-inclusion/side";

/// Poincaré-constant versions of the main and inclusion conditions.
///
/// The first group evaluates both of its displayed inequalities and
/// requires both.
pub fn remark_conditions_check(c: &ConditionInput) -> Result<ConditionVerdict> {
    c.validate()?;
    let Some(cp) = c.c_poin else {
        crate::error::bail!(InvalidInput, "a Poincaré constant is required");
    };
    let n = c.n as f64;
    let (p, q, r, k1, k2) = (c.p, c.q, c.r, c.k1, c.k2);
    let ci = 1.0 / cp;
    let ci2 = ci * ci;
    let r2 = r * r;
    let tail = q * (1.0 + k2) * (1.0 + ci2);
    let mut comps = Vec::new();
    comps.push(Component {
        id: POIN_SIDE,
        slack: (1.0 - k1) - (1.0 - p) * (1.0 / k1 - n) / r2,
        applicable: k1 > 0.0,
    });
    comps.push(Component {
        id: POIN_MAIN,
        slack: (k1 + ci2) - (1.0 - p) * (ci2 / k1 + n) / r2 - tail,
        applicable: k1 > 0.0,
    });
    if let Some(big) = c.big_r {
        let ok = k1 > 0.0 && big <= ci / k1;
        comps.push(Component {
            id: POIN_RADIUS_MAIN,
            slack: (k1 + ci2) - (1.0 - p) * (2.0 * big * ci + n - k1 * big * big) / r2 - tail,
            applicable: ok,
        });
        comps.push(Component {
            id: POIN_RADIUS_SIDE,
            slack: (1.0 - k1) - (1.0 - p) * (k1 * big * big - n) / r2,
            applicable: ok,
        });
    }
    let root = n.sqrt() * (1.0 + k2).sqrt() * (1.0 + ci2).sqrt();
    comps.push(Component {
        id: POIN_INCL_MAIN,
        slack: (k1 + ci2) - (1.0 - p) * (2.0 * root + ci) / (2.0 * r) - tail,
        applicable: true,
    });
    comps.push(Component {
        id: POIN_INCL_SIDE,
        slack: (1.0 - k1) - (1.0 - p) * (cp - ci - root) / (2.0 * r),
        applicable: true,
    });
    Ok(decide(
        comps,
        &[
            ("poincare", &[POIN_SIDE, POIN_MAIN]),
            ("poincare-radius", &[POIN_RADIUS_MAIN, POIN_RADIUS_SIDE]),
            ("poincare-inclusion", &[POIN_INCL_MAIN, POIN_INCL_SIDE]),
        ],
        k1 > 0.0,
    ))
}

/// Default for the unspecified absolute constant of the Lebesgue threshold.
pub const DEFAULT_LEBESGUE_CONSTANT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LebesgueThreshold {
    pub n: usize,
    pub constant: f64,
    /// `max(1 - C n^{-3/4}, 0)`.
    pub p_star: f64,
    /// Earlier bound `max(1 - C n^{-3/2}, 0)` with the same constant.
    pub prior: f64,
}

/// Asymptotic threshold with a user-chosen constant; the true constant is
/// unspecified, so the value is indicative only.
pub fn lebesgue_threshold(n: usize, constant: f64) -> Result<LebesgueThreshold> {
    ensure!(n >= 1, InvalidInput, "dimension must be positive");
    ensure!(constant.is_finite() && constant > 0.0, InvalidInput, "constant must be positive");
    let nf = n as f64;
    Ok(LebesgueThreshold {
        n,
        constant,
        p_star: (1.0 - constant * nf.powf(-0.75)).max(0.0),
        prior: (1.0 - constant * nf.powf(-1.5)).max(0.0),
    })
}

/// The four Gaussian thresholds as slacks comparable with the evaluators:
/// inradius form, containment radius, combined `(p, q)` form, inclusion form.
pub fn gaussian_threshold_slacks(n: usize, p: f64, q: f64, r: f64) -> [f64; 4] {
    let nf = n as f64;
    let r2 = r * r;
    [
        (nf + 1.0) / r2 * (p - 1.0 + 2.0 * r2 / (nf + 1.0)),
        r - (0.5 * (nf + 1.0)).sqrt(),
        2.0 - 4.0 * q - (nf + 1.0) * (1.0 - p) / r2,
        2.0 * (r / (nf.sqrt() + 0.25) - (1.0 - p)) * (nf.sqrt() + 0.25) / r,
    ]
}

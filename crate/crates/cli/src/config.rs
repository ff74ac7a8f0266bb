use std::path::Path;

use anyhow::{Context, Result};
use pqbm_core::bodies::{Body, Family, Shape};
use pqbm_core::boundary::{SmoothBody, TestFunctionBasis, DEFAULT_BOX_EPS, DEFAULT_BOX_KERNEL};
use pqbm_core::geom::Direction;
use pqbm_core::measures::{Density, Method, DEFAULT_BUDGET};
use serde::{Deserialize, Serialize};

/// Version of the configuration schema accepted by this build.
pub const CONFIG_SCHEMA: u32 = 1;

/// A configuration that failed validation; reported with exit code 2.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaError {}

macro_rules! schema {
    ($($arg:tt)*) => {
        anyhow::Error::new($crate::config::SchemaError(format!($($arg)*)))
    };
}
pub(crate) use schema;

macro_rules! check {
    ($cond:expr, $($arg:tt)*) => {
        if !($cond) {
            return Err(schema!($($arg)*));
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckGlobal,
    CheckLocal,
    Conditions,
    Measure,
    Polytope,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckGlobal => "check-global",
            Command::CheckLocal => "check-local",
            Command::Conditions => "conditions",
            Command::Measure => "measure",
            Command::Polytope => "polytope",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodSpec {
    #[default]
    Auto,
    MonteCarlo,
    PolarQuadrature,
    ClosedForm,
}

impl MethodSpec {
    pub fn method(self) -> Method {
        match self {
            MethodSpec::Auto => Method::Auto,
            MethodSpec::MonteCarlo => Method::MonteCarlo,
            MethodSpec::PolarQuadrature => Method::PolarQuadrature,
            MethodSpec::ClosedForm => Method::ClosedForm,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensitySpec {
    Lebesgue,
    Gaussian,
    Power { alpha: f64 },
}

impl DensitySpec {
    pub fn build(&self) -> Result<Density> {
        Ok(match self {
            DensitySpec::Lebesgue => Density::Lebesgue,
            DensitySpec::Gaussian => Density::Gaussian,
            DensitySpec::Power { alpha } => Density::power(*alpha)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        dim: usize,
        r: f64,
    },
    Box {
        half: Vec<f64>,
    },
    Ellipsoid {
        axes: Vec<f64>,
    },
    LqBall {
        dim: usize,
        q: f64,
        scale: f64,
    },
    CrossPolytope {
        dim: usize,
        scale: f64,
    },
    /// Halfspaces `⟨x, u_i⟩ <= h_i`; planar normals may be given as angles.
    Polytope {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        normals: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        angles: Option<Vec<f64>>,
        heights: Vec<f64>,
    },
    Translated {
        base: Box<BodySpec>,
        shift: Vec<f64>,
    },
}

pub fn directions(normals: &Option<Vec<Vec<f64>>>, angles: &Option<Vec<f64>>) -> Result<Vec<Direction>> {
    match (normals, angles) {
        (Some(ns), None) => ns
            .iter()
            .map(|v| Direction::normalized(v).map_err(|e| schema!("bad normal {v:?}: {e}")))
            .collect(),
        (None, Some(a)) => Ok(a.iter().map(|t| Direction::from_angle(*t)).collect()),
        _ => Err(schema!("give exactly one of `normals` or `angles`")),
    }
}

impl BodySpec {
    pub fn build(&self) -> Result<Body> {
        let body = match self {
            BodySpec::Ball { dim, r } => Body::ball(*dim, *r),
            BodySpec::Box { half } => Body::cube(half),
            BodySpec::Ellipsoid { axes } => Body::ellipsoid(axes),
            BodySpec::LqBall { dim, q, scale } => Family::lq_ball(*dim, *q, *scale).and_then(Body::from_family),
            BodySpec::CrossPolytope { dim, scale } => {
                Family::cross_polytope(*dim, *scale).and_then(Body::from_family)
            }
            BodySpec::Polytope {
                normals,
                angles,
                heights,
            } => Body::polytope(directions(normals, angles)?, heights.clone()),
            BodySpec::Translated { base, shift } => Body::translated(base.build()?, shift),
        };
        Ok(body?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BodySpec::Ball { .. } => "ball",
            BodySpec::Box { .. } => "box",
            BodySpec::Ellipsoid { .. } => "ellipsoid",
            BodySpec::LqBall { .. } => "lq-ball",
            BodySpec::CrossPolytope { .. } => "cross-polytope",
            BodySpec::Polytope { .. } => "polytope",
            BodySpec::Translated { .. } => "translated",
        }
    }

    /// Inverse of [`BodySpec::build`] up to normalization of normals.
    pub fn describe(body: &Body) -> Self {
        match body.shape() {
            Shape::Family(f) => match f {
                Family::Ball { dim, r } => BodySpec::Ball { dim: *dim, r: *r },
                Family::Box { half } => BodySpec::Box { half: half.clone() },
                Family::Ellipsoid { axes } => BodySpec::Ellipsoid { axes: axes.clone() },
                Family::LqBall { dim, q, scale } => BodySpec::LqBall {
                    dim: *dim,
                    q: *q,
                    scale: *scale,
                },
                Family::CrossPolytope { dim, scale } => BodySpec::CrossPolytope {
                    dim: *dim,
                    scale: *scale,
                },
            },
            Shape::Polytope(p) => BodySpec::Polytope {
                normals: Some(p.normals().iter().map(|u| u.as_slice().to_vec()).collect()),
                angles: None,
                heights: p.heights().to_vec(),
            },
            Shape::Translated { base, shift } => BodySpec::Translated {
                base: Box::new(Self::describe(base)),
                shift: shift.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SmoothSpec {
    Ball {
        dim: usize,
        r: f64,
    },
    Ellipsoid {
        axes: Vec<f64>,
    },
    SmoothedBox {
        half: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eps: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kernel: Option<f64>,
    },
    /// `h(θ) = c0 + Σ cos[k-1] cos kθ + sin[k-1] sin kθ`.
    Trig {
        c0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

impl SmoothSpec {
    pub fn build(&self) -> Result<SmoothBody> {
        let b = match self {
            SmoothSpec::Ball { dim, r } => SmoothBody::ball(*dim, *r),
            SmoothSpec::Ellipsoid { axes } => SmoothBody::ellipsoid(axes),
            SmoothSpec::SmoothedBox { half, eps, kernel } => SmoothBody::smoothed_box(
                half[0],
                half[1],
                eps.unwrap_or(DEFAULT_BOX_EPS),
                kernel.unwrap_or(DEFAULT_BOX_KERNEL),
            ),
            SmoothSpec::Trig { c0, cos, sin } => SmoothBody::trig(*c0, cos.clone(), sin.clone()),
        };
        Ok(b?)
    }

    fn fill(&mut self) {
        if let SmoothSpec::SmoothedBox { eps, kernel, .. } = self {
            eps.get_or_insert(DEFAULT_BOX_EPS);
            kernel.get_or_insert(DEFAULT_BOX_KERNEL);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BasisSpec {
    /// `{1, cos 2kθ, sin 2kθ : k <= k_max}` (n = 2).
    Trig { k_max: usize },
    /// Even monomials restricted to the sphere (n = 3).
    EvenPolynomials { degree: u32 },
}

impl BasisSpec {
    pub fn build(&self) -> Result<TestFunctionBasis> {
        Ok(match self {
            BasisSpec::Trig { k_max } => {
                check!(*k_max >= 1, "k_max must be at least 1");
                TestFunctionBasis::trig(*k_max)
            }
            BasisSpec::EvenPolynomials { degree } => {
                check!(*degree >= 2, "degree must be at least 2");
                TestFunctionBasis::even_polynomials(*degree)
            }
        })
    }

    fn default_for(dim: usize) -> Option<Self> {
        match dim {
            2 => Some(BasisSpec::Trig {
                k_max: pqbm_core::boundary::DEFAULT_K_MAX,
            }),
            3 => Some(BasisSpec::EvenPolynomials {
                degree: pqbm_core::boundary::DEFAULT_DEGREE,
            }),
            _ => None,
        }
    }
}

fn smooth_dim(s: &SmoothSpec) -> usize {
    match s {
        SmoothSpec::Ball { dim, .. } => *dim,
        SmoothSpec::Ellipsoid { axes } => axes.len(),
        _ => 2,
    }
}

/// Midpoint deficits on the grid `lambda × p × q` (cells with `q > p` are skipped).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidpointCase {
    pub name: String,
    pub k: BodySpec,
    pub l: BodySpec,
    #[serde(default)]
    pub lambda: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
}

/// Concavity of `λ ↦ φ(λK +_p (1-λ)L)` on an equally spaced grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCase {
    pub name: String,
    pub k: BodySpec,
    pub l: BodySpec,
    pub p: f64,
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
}

/// Sweep with `L = tK`, `q = p`, Gaussian measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilatesCase {
    pub name: String,
    pub k: BodySpec,
    pub t: f64,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalCase {
    pub name: String,
    pub body: SmoothSpec,
    pub p: f64,
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSpec>,
    /// Node count (n = 2) or latitude count (n = 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Also write the form and Gram matrices as CSV.
    #[serde(default)]
    pub export_matrices: bool,
}

/// One row of the conditions table, inline or from CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionRow {
    pub label: String,
    /// `gaussian` or `lebesgue` fill in `k1`, `k2`; `custom` requires them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<String>,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_poin: Option<f64>,
}

/// Rows for `p = 0, 1/(steps-1), ..., 1` at fixed `n, q, r, k1, k2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionSweep {
    pub label: String,
    pub n: usize,
    pub q: f64,
    pub r: f64,
    #[serde(default = "one")]
    pub k1: f64,
    #[serde(default = "one")]
    pub k2: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareCase {
    pub name: String,
    pub body: BodySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    pub degree: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionsSection {
    /// CSV of [`ConditionRow`]s, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<ConditionRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<ConditionSweep>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub poincare: Vec<PoincareCase>,
    /// Absolute constant of the asymptotic Lebesgue threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lebesgue_constant: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureCase {
    pub name: String,
    pub body: BodySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
}

/// Two polytopes on a common fan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCase {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normals: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
    pub heights_k: Vec<f64>,
    pub heights_l: Vec<f64>,
    pub p: f64,
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
}

fn one() -> f64 {
    1.0
}

fn default_steps() -> usize {
    101
}

fn default_schema() -> u32 {
    CONFIG_SCHEMA
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub command: Command,
    pub name: String,
    /// The scenario is expected to produce at least one failing row.
    #[serde(default)]
    pub expect_fail: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default)]
    pub method: MethodSpec,
    /// Verdict tolerance; its meaning depends on the command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub midpoint: Vec<MidpointCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dilates: Vec<DilatesCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub local: Vec<LocalCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionsSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measure: Vec<MeasureCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pair: Vec<PairCase>,
}

/// Default number of grid points in concavity sweeps.
pub const DEFAULT_SWEEP_STEPS: usize = 9;

/// Command-line overrides applied on top of the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub tol: Option<f64>,
}

pub fn default_tol(command: Command) -> f64 {
    match command {
        Command::CheckLocal => 1e-8,
        _ => 0.0,
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| schema!("{e}"))
    }

    pub fn density(&self, case: &Option<DensitySpec>) -> Result<Density> {
        case.as_ref()
            .or(self.density.as_ref())
            .ok_or_else(|| schema!("no density given for the case or at top level"))?
            .build()
            .map_err(|e| schema!("{e}"))
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| default_tol(self.command))
    }

    /// Applies overrides, fills defaults and checks the parts of the schema
    /// that serde cannot express.
    pub fn resolve(mut self, o: Overrides) -> Result<Self> {
        check!(
            self.schema == CONFIG_SCHEMA,
            "unsupported schema version {} (expected {CONFIG_SCHEMA})", self.schema);
        check!(
            !self.name.is_empty() && self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)),
            "name must be nonempty and use only [A-Za-z0-9-_.]");
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(b) = o.budget {
            self.budget = Some(b);
        }
        if let Some(t) = o.tol {
            self.tol = Some(t);
        }
        self.budget.get_or_insert(DEFAULT_BUDGET);
        self.tol.get_or_insert(default_tol(self.command));
        let tol = self.tol();
        check!(tol.is_finite() && tol >= 0.0, "tol must be finite and nonnegative");
        let sections = [
            (Command::CheckGlobal, !self.midpoint.is_empty() || !self.sweep.is_empty() || !self.dilates.is_empty()),
            (Command::CheckLocal, !self.local.is_empty()),
            (Command::Conditions, self.conditions.is_some()),
            (Command::Measure, !self.measure.is_empty()),
            (Command::Polytope, !self.pair.is_empty()),
        ];
        for (cmd, present) in sections {
            if cmd == self.command {
                check!(present, "`{}` needs at least one case", cmd.name());
            } else {
                check!(!present, "sections for `{}` are not allowed in a `{}` config", cmd.name(), self.command.name());
            }
        }
        let mut names: Vec<&str> = Vec::new();
        for m in &mut self.midpoint {
            if m.lambda.is_empty() {
                m.lambda.push(0.5);
            }
            check!(!m.p.is_empty() && !m.q.is_empty(), "case {}: p and q lists must be nonempty", m.name);
        }
        for s in &mut self.sweep {
            s.steps.get_or_insert(DEFAULT_SWEEP_STEPS);
        }
        for d in &mut self.dilates {
            d.steps.get_or_insert(DEFAULT_SWEEP_STEPS);
        }
        for l in &mut self.local {
            l.body.fill();
            if l.basis.is_none() {
                l.basis = BasisSpec::default_for(smooth_dim(&l.body));
            }
        }
        if let Some(c) = &mut self.conditions {
            c.lebesgue_constant.get_or_insert(pqbm_core::conditions::DEFAULT_LEBESGUE_CONSTANT);
            check!(
                c.input.is_some() || !c.rows.is_empty() || !c.sweep.is_empty() || !c.poincare.is_empty(),
                "[conditions] needs input, rows, sweep or poincare entries");
            for s in &c.sweep {
                check!(s.steps >= 2, "sweep {}: steps must be at least 2", s.label);
            }
        }
        names.extend(self.midpoint.iter().map(|c| c.name.as_str()));
        names.extend(self.sweep.iter().map(|c| c.name.as_str()));
        names.extend(self.dilates.iter().map(|c| c.name.as_str()));
        names.extend(self.local.iter().map(|c| c.name.as_str()));
        names.extend(self.measure.iter().map(|c| c.name.as_str()));
        names.extend(self.pair.iter().map(|c| c.name.as_str()));
        let mut sorted = names.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(schema!("duplicate case name `{}`", w[0]));
        }
        Ok(self)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_specs_round_trip() {
        let specs = [
            BodySpec::Ball { dim: 3, r: 1.5 },
            BodySpec::Box { half: vec![1.0, 2.0] },
            BodySpec::LqBall {
                dim: 2,
                q: 4.0,
                scale: 1.0,
            },
            BodySpec::Translated {
                base: Box::new(BodySpec::Ball { dim: 2, r: 1.0 }),
                shift: vec![5.0, 0.0],
            },
        ];
        for s in specs {
            let b = s.build().unwrap();
            assert_eq!(BodySpec::describe(&b), s);
            let text = toml::to_string(&s).unwrap();
            assert_eq!(toml::from_str::<BodySpec>(&text).unwrap(), s);
        }
        let sq = BodySpec::Polytope {
            normals: None,
            angles: Some(vec![0.0, 1.5707963267948966, 3.141592653589793, 4.71238898038469]),
            heights: vec![1.0; 4],
        };
        let b = sq.build().unwrap();
        let again = BodySpec::describe(&b).build().unwrap();
        assert!((b.inradius() - again.inradius()).abs() < 1e-15);
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let e = RunConfig::parse("command = \"measure\"\nname = \"x\"\nbogus = 1\n").unwrap_err();
        assert!(e.is::<SchemaError>());
        let e = RunConfig::parse(
            "command = \"measure\"\nname = \"x\"\n[[measure]]\nname = \"a\"\nbody = { kind = \"ball\", dim = 2, r = 1, extra = 2 }\n",
        )
        .unwrap_err();
        assert!(e.is::<SchemaError>());
    }

    #[test]
    fn foreign_sections_are_rejected() {
        let c = RunConfig::parse(
            "command = \"measure\"\nname = \"x\"\n[[measure]]\nname = \"a\"\nbody = { kind = \"ball\", dim = 2, r = 1 }\n[[local]]\nname = \"b\"\np = 1\nq = 0\nbody = { kind = \"ball\", dim = 2, r = 1 }\n",
        )
        .unwrap();
        assert!(c.resolve(Overrides::default()).unwrap_err().is::<SchemaError>());
    }
}

use anyhow::Result;
use pqbm_core::bodies::Body;
use pqbm_core::conditions::{theorem_main_check, ConditionInput};
use pqbm_core::global::{concavity_sweep, dilates_check, midpoint_check, SweepReport, Verdict, NUMERIC_FLOOR};
use pqbm_core::measures::Density;
use serde_json::json;

use super::Ctx;
use crate::config::BodySpec;
use crate::report::{jnum, num, seed_str, Outcome, Table};

const COLUMNS: [&str; 16] = [
    "case",
    "mode",
    "density",
    "lambda",
    "p",
    "q",
    "mu_k",
    "mu_l",
    "mu_m",
    "phi",
    "statistic",
    "value",
    "stderr",
    "verdict",
    "method",
    "condition_slack",
];

/// Slack of the main sufficient condition for Gaussian pairs of symmetric bodies.
fn condition_slack(k: &Body, l: &Body, p: f64, q: f64, density: &Density) -> Option<f64> {
    if *density != Density::Gaussian || !k.is_symmetric() || !l.is_symmetric() {
        return None;
    }
    let r = k.inradius().min(l.inradius());
    theorem_main_check(&ConditionInput::gaussian(k.dim(), p, q, r)).ok().map(|v| v.slack)
}

fn classify(value: f64, stderr: f64, scale: f64, tol: f64) -> Verdict {
    Verdict::classify(value + tol, stderr.max(NUMERIC_FLOOR * scale.abs().max(1.0)))
}

fn grid(steps: usize) -> Vec<f64> {
    (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect()
}

struct SweepRows<'a> {
    case: &'a str,
    mode: &'static str,
    density: &'a Density,
    p: f64,
    q: f64,
    formula: &'static str,
    anchor: &'static str,
}

fn sweep_rows(out: &mut Outcome, s: &SweepRows<'_>, r: &SweepReport, tol: f64) -> (usize, f64) {
    let mut fails = 0;
    let mut worst = f64::INFINITY;
    for i in 1..r.lambdas.len() - 1 {
        let margin = -r.second_differences[i - 1];
        let se = r.second_stderr[i - 1];
        let v = classify(margin, se, r.phi[i], tol);
        out.tally.add(v.name());
        fails += (v == Verdict::Fails) as usize;
        worst = worst.min(margin);
        out.main.push(vec![
            s.case.into(),
            s.mode.into(),
            s.density.name().into(),
            num(r.lambdas[i]),
            num(s.p),
            num(s.q),
            String::new(),
            String::new(),
            num(r.measures[i]),
            num(r.phi[i]),
            "concavity-margin".into(),
            num(margin),
            num(se),
            v.name().into(),
            r.method.name().into(),
            String::new(),
            s.formula.into(),
            s.anchor.into(),
            seed_str(r.seed),
            r.budget.to_string(),
        ]);
    }
    (fails, worst)
}

fn sweep_json(r: &SweepReport) -> serde_json::Value {
    json!({
        "lambdas": r.lambdas,
        "measures": r.measures.iter().map(|v| jnum(*v)).collect::<Vec<_>>(),
        "phi": r.phi.iter().map(|v| jnum(*v)).collect::<Vec<_>>(),
        "second_differences": r.second_differences,
        "second_stderr": r.second_stderr,
        "concave": r.concave,
    })
}

pub fn run(ctx: &Ctx<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let tol = cfg.tol();
    let mut out = Outcome {
        main: Table::new(&COLUMNS),
        ..Outcome::default()
    };
    let mut cell = 0u64;
    for c in &cfg.midpoint {
        let density = cfg.density(&c.density)?;
        let (k, l) = (c.k.build()?, c.l.build()?);
        let mut fails = 0;
        let mut worst = f64::INFINITY;
        let mut rows = 0;
        for &lambda in &c.lambda {
            for &p in &c.p {
                for &q in &c.q {
                    if q > p {
                        continue;
                    }
                    let est = ctx.cell(cell);
                    cell += 1;
                    let r = midpoint_check(&k, &l, lambda, p, q, &density, &est)?;
                    let scale = r.mu_k.abs().max(r.mu_l.abs());
                    let v = if tol > 0.0 { classify(r.deficit, r.stderr, scale, tol) } else { r.verdict };
                    out.tally.add(v.name());
                    fails += (v == Verdict::Fails) as usize;
                    worst = worst.min(r.deficit);
                    rows += 1;
                    out.main.push(vec![
                        c.name.clone(),
                        "midpoint".into(),
                        density.name().into(),
                        num(lambda),
                        num(p),
                        num(q),
                        num(r.mu_k),
                        num(r.mu_l),
                        num(r.mu_m),
                        String::new(),
                        "deficit".into(),
                        num(r.deficit),
                        num(r.stderr),
                        v.name().into(),
                        r.method.name().into(),
                        condition_slack(&k, &l, p, q, &density).map(num).unwrap_or_default(),
                        "global.midpoint-deficit".into(),
                        "pq-inequality:midpoint".into(),
                        seed_str(r.seed),
                        r.budget.to_string(),
                    ]);
                }
            }
        }
        out.cases.push(json!({
            "name": c.name,
            "mode": "midpoint",
            "density": density.name(),
            "k": BodySpec::describe(&k),
            "l": BodySpec::describe(&l),
            "rows": rows,
            "fails": fails,
            "min_deficit": jnum(worst),
        }));
    }
    for c in &cfg.sweep {
        let density = cfg.density(&c.density)?;
        let (k, l) = (c.k.build()?, c.l.build()?);
        let est = ctx.cell(cell);
        cell += 1;
        let r = concavity_sweep(&k, &l, c.p, c.q, &density, &grid(c.steps.unwrap_or_default()), &est)?;
        let s = SweepRows {
            case: &c.name,
            mode: "sweep",
            density: &density,
            p: c.p,
            q: c.q,
            formula: "global.concavity-second-difference",
            anchor: "pq-inequality:concavity-in-lambda",
        };
        let (fails, worst) = sweep_rows(&mut out, &s, &r, tol);
        out.cases.push(json!({
            "name": c.name,
            "mode": "sweep",
            "density": density.name(),
            "p": c.p,
            "q": c.q,
            "fails": fails,
            "min_margin": jnum(worst),
            "sweep": sweep_json(&r),
        }));
    }
    for c in &cfg.dilates {
        let k = c.k.build()?;
        let est = ctx.cell(cell);
        cell += 1;
        let density = Density::Gaussian;
        let r = dilates_check(&k, c.t, c.p, &density, &grid(c.steps.unwrap_or_default()), &est)?;
        let s = SweepRows {
            case: &c.name,
            mode: "dilates",
            density: &density,
            p: c.p,
            q: c.p,
            formula: "global.dilates-second-difference",
            anchor: "gaussian-dilates:concavity-in-lambda",
        };
        let (fails, worst) = sweep_rows(&mut out, &s, &r, tol);
        out.cases.push(json!({
            "name": c.name,
            "mode": "dilates",
            "density": density.name(),
            "t": c.t,
            "p": c.p,
            "fails": fails,
            "min_margin": jnum(worst),
            "sweep": sweep_json(&r),
        }));
    }
    Ok(out)
}

use anyhow::{Context, Result};
use pqbm_core::conditions::{
    lebesgue_threshold, main_linear_slack, poincare_estimate, prop_main_check, remark_conditions_check,
    theorem_main_check, ConditionInput, ConditionVerdict, MAIN_BRANCH_1,
};
use serde_json::json;

use super::Ctx;
use crate::config::{schema, ConditionRow};
use crate::report::{jnum, num, opt, seed_str, Outcome, Table};

const COLUMNS: [&str; 16] = [
    "label",
    "evaluator",
    "density",
    "n",
    "p",
    "q",
    "r",
    "big_r",
    "k1",
    "k2",
    "c_poin",
    "branch",
    "slack",
    "satisfied",
    "in_hypothesis",
    "note",
];

const POINCARE_COLUMNS: [&str; 9] = [
    "case",
    "density",
    "n",
    "degree",
    "basis_size",
    "inv_sq_estimate",
    "floor",
    "c_poin",
    "method",
];

fn input(row: &ConditionRow) -> Result<(String, ConditionInput)> {
    let kind = row.density.as_deref().unwrap_or("custom");
    let (k1, k2) = match kind {
        "gaussian" | "lebesgue" => {
            if row.k1.is_some() || row.k2.is_some() {
                return Err(schema!("row {}: k1, k2 are implied by density `{kind}`", row.label));
            }
            if kind == "gaussian" {
                (1.0, 1.0)
            } else {
                (0.0, 0.0)
            }
        }
        "custom" => match (row.k1, row.k2) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(schema!("row {}: custom rows need k1 and k2", row.label)),
        },
        other => return Err(schema!("row {}: unknown density `{other}`", row.label)),
    };
    let c = ConditionInput {
        n: row.n,
        p: row.p,
        q: row.q,
        r: row.r,
        big_r: row.big_r,
        k1,
        k2,
        c_poin: row.c_poin,
    };
    c.validate().map_err(|e| schema!("row {}: {e}", row.label))?;
    Ok((kind.to_string(), c))
}

struct Emit<'a> {
    out: &'a mut Outcome,
    tol: f64,
    seed: u64,
    budget: u64,
}

impl Emit<'_> {
    #[allow(clippy::too_many_arguments)]
    fn row(&mut self, label: &str, evaluator: &str, density: &str, c: &ConditionInput, branch: &str, slack: f64, satisfied: bool, in_hyp: bool, note: &str, anchor: &str) {
        self.out.main.push(vec![
            label.into(),
            evaluator.into(),
            density.into(),
            c.n.to_string(),
            num(c.p),
            num(c.q),
            num(c.r),
            opt(c.big_r),
            num(c.k1),
            num(c.k2),
            opt(c.c_poin),
            branch.into(),
            num(slack),
            satisfied.to_string(),
            in_hyp.to_string(),
            note.into(),
            branch.into(),
            anchor.into(),
            self.seed.to_string(),
            self.budget.to_string(),
        ]);
    }

    fn verdict(&mut self, label: &str, evaluator: &str, density: &str, c: &ConditionInput, v: &ConditionVerdict, anchor: &str) {
        let ok = v.in_hypothesis && v.slack >= -self.tol;
        let note = if v.in_hypothesis { "" } else { "out of hypothesis" };
        self.row(label, evaluator, density, c, v.branch, v.slack, ok, v.in_hypothesis, note, anchor);
    }
}

fn evaluate(e: &mut Emit<'_>, label: &str, density: &str, c: &ConditionInput, constant: f64) -> Result<()> {
    e.verdict(label, "main-condition", density, c, &theorem_main_check(c)?, "sufficient-condition:main");
    e.verdict(label, "inclusion-condition", density, c, &prop_main_check(c)?, "sufficient-condition:inclusion");
    if c.c_poin.is_some() {
        e.verdict(label, "poincare-condition", density, c, &remark_conditions_check(c)?, "sufficient-condition:poincare");
    }
    if density == "lebesgue" {
        let t = lebesgue_threshold(c.n, constant)?;
        let slack = c.p - t.p_star;
        let note = format!("asymptotic, constant unspecified (C = {}); prior bound {}", num(constant), num(t.prior));
        e.row(label, "lebesgue-threshold", density, c, "lebesgue/asymptotic", slack, slack >= -e.tol, true, &note, "lebesgue-threshold:asymptotic");
    }
    Ok(())
}

pub fn run(ctx: &Ctx<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let sec = cfg.conditions.as_ref().expect("checked by resolve");
    let constant = sec.lebesgue_constant.expect("filled by resolve");
    let mut out = Outcome {
        main: Table::new(&COLUMNS),
        ..Outcome::default()
    };
    let mut rows: Vec<ConditionRow> = Vec::new();
    if let Some(path) = &sec.input {
        let full = ctx.base.join(path);
        let mut rd = csv::Reader::from_path(&full).with_context(|| format!("reading {}", full.display()))?;
        for rec in rd.deserialize() {
            rows.push(rec.map_err(|e| schema!("{}: {e}", full.display()))?);
        }
    }
    rows.extend(sec.rows.iter().cloned());
    let mut sweeps = Vec::new();
    {
        let mut e = Emit {
            out: &mut out,
            tol: cfg.tol(),
            seed: cfg.seed,
            budget: cfg.budget(),
        };
        for row in &rows {
            let (density, c) = input(row)?;
            evaluate(&mut e, &row.label, &density, &c, constant)?;
        }
        for s in &sec.sweep {
            let mut prev: Option<(f64, f64)> = None;
            let mut crossing = None;
            for i in 0..s.steps {
                let p = i as f64 / (s.steps - 1) as f64;
                let c = ConditionInput {
                    n: s.n,
                    p,
                    q: s.q,
                    r: s.r,
                    big_r: None,
                    k1: s.k1,
                    k2: s.k2,
                    c_poin: None,
                };
                if s.q > p {
                    continue;
                }
                c.validate().map_err(|err| schema!("sweep {}: {err}", s.label))?;
                let v = theorem_main_check(&c)?;
                e.verdict(&format!("{}:{i}", s.label), "main-condition", "custom", &c, &v, "sufficient-condition:main");
                let lin = v.component(MAIN_BRANCH_1).map(|x| x.slack).unwrap_or(main_linear_slack(&c));
                if let Some((p0, s0)) = prev {
                    if crossing.is_none() && s0 < 0.0 && lin >= 0.0 {
                        crossing = Some(p0 - s0 * (p - p0) / (lin - s0));
                    }
                }
                prev = Some((p, lin));
            }
            let n = s.n as f64;
            let closed = 1.0 - s.r * s.r * (2.0 * s.k1 - s.q * (1.0 + s.k2) * (1.0 + s.k1)) / (n + 1.0);
            if let Some(pc) = crossing {
                let c = ConditionInput {
                    n: s.n,
                    p: pc,
                    q: s.q,
                    r: s.r,
                    big_r: None,
                    k1: s.k1,
                    k2: s.k2,
                    c_poin: None,
                };
                e.row(
                    &s.label,
                    "sweep-crossing",
                    "custom",
                    &c,
                    MAIN_BRANCH_1,
                    main_linear_slack(&c),
                    true,
                    s.k1 > 0.0,
                    "p where the linear branch slack changes sign",
                    "sufficient-condition:main",
                );
            }
            sweeps.push(json!({
                "label": s.label,
                "steps": s.steps,
                "crossing": crossing.map(jnum),
                "closed_form_crossing": jnum(closed),
            }));
        }
    }
    out.cases.push(json!({ "rows": rows.len(), "sweeps": sweeps, "lebesgue_constant": constant }));
    if !sec.poincare.is_empty() {
        let mut t = Table::new(&POINCARE_COLUMNS);
        for (i, pc) in sec.poincare.iter().enumerate() {
            let density = cfg.density(&pc.density)?;
            let body = pc.body.build()?;
            let est = ctx.cell(i as u64);
            let r = poincare_estimate(&body, &density, pc.degree, &est)?;
            let deterministic = r.method != pqbm_core::measures::Method::MonteCarlo;
            t.push(vec![
                pc.name.clone(),
                density.name().into(),
                body.dim().to_string(),
                pc.degree.to_string(),
                r.basis_size.to_string(),
                num(r.inv_sq_estimate),
                num(r.floor),
                num(r.c_poin),
                r.method.name().into(),
                "conditions.poincare-rayleigh".into(),
                "poincare-constant:subspace-estimate".into(),
                seed_str((!deterministic).then_some(est.seed)),
                est.budget.to_string(),
            ]);
            out.cases.push(json!({
                "poincare": pc.name,
                "inv_sq_estimate": jnum(r.inv_sq_estimate),
                "bracket": [jnum(r.floor), jnum(r.inv_sq_estimate)],
                "c_poin": jnum(r.c_poin),
                "note": "subspace estimate, biased toward larger inverse-square constant",
            }));
        }
        out.extra.push(("poincare".into(), t));
    }
    Ok(out)
}

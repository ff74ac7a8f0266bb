use anyhow::Result;
use pqbm_core::measures::measure;
use pqbm_core::polytope::{measure_derivative, strong_isomorphy_probe, IsomorphicPair, NormalFan};
use serde_json::json;

use super::Ctx;
use crate::config::directions;
use crate::report::{jnum, num, seed_str, Outcome, Table};

const COLUMNS: [&str; 10] = [
    "case",
    "density",
    "lambda",
    "p",
    "measure",
    "measure_stderr",
    "derivative",
    "derivative_stderr",
    "type_change",
    "facets",
];

pub fn run(ctx: &Ctx<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let mut out = Outcome {
        main: Table::new(&COLUMNS),
        ..Outcome::default()
    };
    let mut cell = 0u64;
    for c in &cfg.pair {
        let density = cfg.density(&c.density)?;
        let fan = NormalFan::new(directions(&c.normals, &c.angles)?)?;
        let pair = IsomorphicPair::new(fan, c.heights_k.clone(), c.heights_l.clone(), c.p)?;
        for &lambda in &c.lambda {
            let d = measure_derivative(&pair, lambda, &density)?;
            let m = measure(&pair.body_at(lambda)?, &density, &ctx.cell(cell))?;
            cell += 1;
            let present = d.facets.measures.iter().filter(|v| **v > 0.0).count();
            out.main.push(vec![
                c.name.clone(),
                density.name().into(),
                num(lambda),
                num(c.p),
                num(m.value),
                num(m.stderr),
                num(d.value),
                num(d.stderr),
                d.type_change.to_string(),
                present.to_string(),
                "polytope.measure-derivative".into(),
                "polytope-interpolation:first-derivative".into(),
                seed_str(m.seed),
                m.budget.to_string(),
            ]);
        }
        let intervals = strong_isomorphy_probe(&pair, &c.lambda)?;
        out.cases.push(json!({
            "name": c.name,
            "p": c.p,
            "intervals": intervals
                .iter()
                .map(|iv| json!({ "start": jnum(iv.start), "end": jnum(iv.end), "active": iv.active }))
                .collect::<Vec<_>>(),
        }));
    }
    Ok(out)
}

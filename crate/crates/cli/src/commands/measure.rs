use anyhow::Result;
use pqbm_core::measures::measure;
use serde_json::json;

use super::Ctx;
use crate::report::{jnum, num, seed_str, Outcome, Table};

const COLUMNS: [&str; 7] = ["case", "body", "density", "n", "value", "stderr", "method"];

pub fn run(ctx: &Ctx<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let mut out = Outcome {
        main: Table::new(&COLUMNS),
        ..Outcome::default()
    };
    for (i, c) in cfg.measure.iter().enumerate() {
        let density = cfg.density(&c.density)?;
        let body = c.body.build()?;
        let m = measure(&body, &density, &ctx.cell(i as u64))?;
        out.main.push(vec![
            c.name.clone(),
            c.body.kind().into(),
            density.name().into(),
            body.dim().to_string(),
            num(m.value),
            num(m.stderr),
            m.method.name().into(),
            "measures.estimate".into(),
            "restricted-measure".into(),
            seed_str(m.seed),
            m.budget.to_string(),
        ]);
        out.cases.push(json!({
            "name": c.name,
            "body": c.body,
            "density": density.name(),
            "estimate": {
                "value": jnum(m.value),
                "stderr": jnum(m.stderr),
                "method": m.method.name(),
                "seed": m.seed,
                "budget": m.budget,
            },
        }));
    }
    Ok(out)
}

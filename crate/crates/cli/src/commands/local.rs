use anyhow::Result;
use pqbm_core::boundary::{local_form_matrices, local_form_max, BoundaryGrid, GridFn, SphereFn};
use serde_json::json;

use super::Ctx;
use crate::config::{LocalCase, SmoothSpec};
use crate::report::{jnum, num, Outcome, Table};

const COLUMNS: [&str; 15] = [
    "case",
    "body",
    "density",
    "n",
    "p",
    "q",
    "basis_size",
    "max_eigenvalue",
    "second_eigenvalue",
    "tol",
    "verdict",
    "mode",
    "mode_vs_support",
    "mode_term",
    "nodes",
];

/// Relative deviation of the argmax mode from the best multiple of `h`.
const SUPPORT_MODE_TOL: f64 = 1e-6;

fn body_kind(s: &SmoothSpec) -> &'static str {
    match s {
        SmoothSpec::Ball { .. } => "ball",
        SmoothSpec::Ellipsoid { .. } => "ellipsoid",
        SmoothSpec::SmoothedBox { .. } => "smoothed-box",
        SmoothSpec::Trig { .. } => "trig",
    }
}

fn label(f: &SphereFn) -> String {
    match f {
        SphereFn::Trig { c0, cos, sin } => {
            if let Some(k) = cos.iter().position(|c| *c != 0.0) {
                format!("cos{}t", k + 1)
            } else if let Some(k) = sin.iter().position(|c| *c != 0.0) {
                format!("sin{}t", k + 1)
            } else {
                num(*c0)
            }
        }
        SphereFn::Poly(terms) => terms
            .iter()
            .map(|(_, a)| monomial(a))
            .collect::<Vec<_>>()
            .join("+"),
        SphereFn::Support => "h".into(),
    }
}

fn monomial(a: &[u32; 3]) -> String {
    let m: String = ["x", "y", "z"]
        .iter()
        .zip(a)
        .filter(|(_, e)| **e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if m.is_empty() {
        "1".into()
    } else {
        m
    }
}

fn support_deviation(grid: &BoundaryGrid, mode: &GridFn) -> f64 {
    let h: Vec<f64> = grid.nodes().iter().map(|nd| nd.h).collect();
    let s = mode.values.iter().zip(&h).map(|(g, h)| g * h).sum::<f64>() / h.iter().map(|h| h * h).sum::<f64>();
    mode.values
        .iter()
        .zip(&h)
        .map(|(g, h)| (g - s * h).abs() / (s * h).abs())
        .fold(0.0, f64::max)
}

fn export(out: &mut Outcome, c: &LocalCase, grid: &BoundaryGrid) -> Result<()> {
    let basis = c.basis.as_ref().expect("filled by resolve").build()?;
    let (m, g) = local_form_matrices(grid, c.p, c.q, &basis)?;
    for (which, mat) in [("form", &m), ("gram", &g)] {
        let mut t = Table {
            header: vec!["row", "col", "value"],
            rows: Vec::new(),
        };
        for i in 0..mat.nrows() {
            for j in 0..mat.ncols() {
                t.rows.push(vec![i.to_string(), j.to_string(), num(mat[(i, j)])]);
            }
        }
        out.extra.push((format!("{}.{which}", c.name), t));
    }
    Ok(())
}

pub fn run(ctx: &Ctx<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let mut out = Outcome {
        main: Table::new(&COLUMNS),
        ..Outcome::default()
    };
    for c in &cfg.local {
        let density = cfg.density(&c.density)?;
        let body = c.body.build()?;
        let grid = match c.resolution {
            Some(res) => BoundaryGrid::with_resolution(&body, density, res)?,
            None => BoundaryGrid::new(&body, density)?,
        };
        let basis = c.basis.as_ref().expect("filled by resolve").build()?;
        let r = local_form_max(&grid, c.p, c.q, &basis)?;
        // the core tolerance is 1e-8 times the largest matrix entry
        let tol = cfg.tol() * r.tol / 1e-8;
        let holds = r.max_eigenvalue <= tol;
        let verdict = if holds { "holds" } else { "fails" };
        out.tally.add(verdict);
        let samples = basis.sample(&grid)?;
        let mut mode = GridFn {
            values: vec![0.0; grid.len()],
            grads: vec![[0.0; 2]; grid.len()],
        };
        for (k, f) in r.coefficients.iter().zip(&samples) {
            mode = mode.add_scaled(f, *k);
        }
        let dev = support_deviation(&grid, &mode);
        let top = r
            .coefficients
            .iter()
            .enumerate()
            .fold(0, |b, (i, v)| if v.abs() > r.coefficients[b].abs() { i } else { b });
        let (mode_name, term) = if dev <= SUPPORT_MODE_TOL {
            ("support-function", "h".to_string())
        } else {
            ("basis", label(&basis.functions[top]))
        };
        let second = r.eigenvalues.get(1).copied().unwrap_or(f64::NEG_INFINITY);
        out.main.push(vec![
            c.name.clone(),
            body_kind(&c.body).into(),
            density.name().into(),
            grid.dim().to_string(),
            num(c.p),
            num(c.q),
            basis.len().to_string(),
            num(r.max_eigenvalue),
            num(second),
            num(tol),
            verdict.into(),
            mode_name.into(),
            num(dev),
            term.clone(),
            grid.len().to_string(),
            "boundary.local-form-max-eigenvalue".into(),
            "local-pq-form:generalized-eigenvalue".into(),
            "none".into(),
            grid.len().to_string(),
        ]);
        out.cases.push(json!({
            "name": c.name,
            "body": c.body,
            "density": density.name(),
            "p": c.p,
            "q": c.q,
            "basis": c.basis,
            "basis_size": basis.len(),
            "max_eigenvalue": jnum(r.max_eigenvalue),
            "eigenvalues": r.eigenvalues.iter().map(|v| jnum(*v)).collect::<Vec<_>>(),
            "tol": jnum(tol),
            "verdict": verdict,
            "mode": mode_name,
            "mode_term": term,
            "mode_vs_support": jnum(dev),
            "coefficients": r.coefficients.iter().map(|v| jnum(*v)).collect::<Vec<_>>(),
        }));
        if c.export_matrices {
            export(&mut out, c, &grid)?;
        }
    }
    Ok(out)
}

mod conditions;
mod global;
mod local;
mod measure;
mod polytope;

use std::path::PathBuf;

use anyhow::Result;
use pqbm_core::measures::Estimator;

use crate::config::{Command, RunConfig};
use crate::report::Outcome;

/// Resolved config plus the estimator every case starts from.
pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub est: Estimator<'a>,
    /// Directory of the config file; relative input paths start here.
    pub base: PathBuf,
}

impl Ctx<'_> {
    /// Estimator for the `index`-th independent cell of the run.
    pub fn cell(&self, index: u64) -> Estimator<'_> {
        self.est.with_seed(self.est.derive_seed(index))
    }
}

pub fn run(ctx: &Ctx<'_>) -> Result<Outcome> {
    match ctx.cfg.command {
        Command::CheckGlobal => global::run(ctx),
        Command::CheckLocal => local::run(ctx),
        Command::Conditions => conditions::run(ctx),
        Command::Measure => measure::run(ctx),
        Command::Polytope => polytope::run(ctx),
    }
}

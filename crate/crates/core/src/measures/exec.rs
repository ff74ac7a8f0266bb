use alloc::vec::Vec;

/// Runs independent numbered tasks; results are returned in task order.
///
/// Implementations may run tasks concurrently. Estimates never depend on the
/// schedule because every task derives its own random stream from its index.
pub trait Executor: Sync {
    fn run(&self, tasks: usize, job: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>>;
}

/// Runs tasks one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run(&self, tasks: usize, job: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        (0..tasks).map(job).collect()
    }
}

pub(crate) static SEQUENTIAL: Sequential = Sequential;

/// How a measure or restricted integral is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Closed form when available, then polar quadrature (n <= 3), then
    /// Monte Carlo.
    Auto,
    MonteCarlo,
    PolarQuadrature,
    ClosedForm,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::MonteCarlo => "monte-carlo",
            Method::PolarQuadrature => "polar-quadrature",
            Method::ClosedForm => "closed-form",
        }
    }
}

/// Default Monte Carlo budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Smallest accepted Monte Carlo budget.
pub const MIN_BUDGET: u64 = 1_000;
/// Samples per independently seeded chunk.
pub const CHUNK: u64 = 65_536;

/// Estimation settings shared by every stochastic operation.
#[derive(Clone, Copy)]
pub struct Estimator<'e> {
    pub method: Method,
    pub budget: u64,
    pub seed: u64,
    pub executor: &'e dyn Executor,
}

impl core::fmt::Debug for Estimator<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Estimator")
            .field("method", &self.method)
            .field("budget", &self.budget)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

impl Default for Estimator<'static> {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            budget: DEFAULT_BUDGET,
            seed: 0,
            executor: &SEQUENTIAL,
        }
    }
}

impl<'e> Estimator<'e> {
    pub fn monte_carlo(budget: u64, seed: u64) -> Estimator<'static> {
        Estimator {
            method: Method::MonteCarlo,
            budget,
            seed,
            executor: &SEQUENTIAL,
        }
    }

    pub fn with_method(self, method: Method) -> Self {
        Self { method, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_executor<'f>(self, executor: &'f dyn Executor) -> Estimator<'f> {
        Estimator {
            method: self.method,
            budget: self.budget,
            seed: self.seed,
            executor,
        }
    }

    /// Child seed for sub-task `index`, derived deterministically.
    pub fn derive_seed(&self, index: u64) -> u64 {
        // splitmix64 step
        let mut z = self.seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use pqbm_core::measures::Executor;

/// Runs tasks on a fixed number of scoped worker threads.
#[derive(Clone, Copy, Debug)]
pub struct Threads(pub usize);

impl Executor for Threads {
    fn run(&self, tasks: usize, job: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        let workers = self.0.clamp(1, tasks.max(1));
        if workers == 1 {
            return (0..tasks).map(job).collect();
        }
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<Vec<f64>>>> = Mutex::new(vec![None; tasks]);
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= tasks {
                        break;
                    }
                    let out = job(i);
                    slots.lock().unwrap()[i] = Some(out);
                });
            }
        });
        slots
            .into_inner()
            .unwrap()
            .into_iter()
            .map(|v| v.expect("every task ran"))
            .collect()
    }
}

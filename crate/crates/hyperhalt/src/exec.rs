//! Multi-threaded trial execution.

use hyperhalt_core::TrialExecutor;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Runs trials on a dedicated rayon pool. Results come back in trial order,
/// so reductions match [`hyperhalt_core::Sequential`] bit for bit.
#[derive(Debug)]
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `workers = 0` lets rayon pick from the available cores.
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Parallel { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TrialExecutor for Parallel {
    fn map_trials<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.pool.install(|| (0..trials).into_par_iter().map(f).collect())
    }
}

//! Sweeps, figure data and validation suites on top of `decay-core`.

pub mod compare;
pub mod config;
pub mod figures;
pub mod output;
pub mod run;
pub mod suite;
pub mod table;

use std::sync::OnceLock;

use anyhow::Result;
use rayon::prelude::*;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "DECAY_THREADS";

/// Shared pool sized by `DECAY_THREADS`, or by the machine when unset.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
    })
}

/// Order-preserving parallel map over independent inputs; any error aborts it.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    pool().install(|| items.par_iter().map(&f).collect())
}

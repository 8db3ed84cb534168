//! Parallel evaluation over independent grid points with a deterministic,
//! index-ordered reduction: output bytes are identical for every `--jobs`.

use crate::config::CliError;
use rayon::prelude::*;

/// Cap the global worker pool. Callable at most once, before any parallel
/// work has started.
pub fn set_jobs(jobs: usize) -> Result<(), CliError> {
    if jobs == 0 {
        return Err(CliError::config("--jobs must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot configure worker pool: {e}")))
}

/// Map `f` over the items in parallel, returning results in input order.
pub fn ordered_map<T, U, F>(items: Vec<T>, f: F) -> Result<Vec<U>, CliError>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Result<U, CliError> + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

//! Order-preserving map over a batch of independent jobs.
//!
//! With the `parallel` feature this fans out on the rayon pool; without it,
//! it is a plain iterator map. Either way results come back in job order, so
//! everything built on top is deterministic regardless of thread count.

#[cfg(feature = "parallel")]
pub(crate) fn map_jobs<T, U, F>(jobs: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    jobs.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_jobs<T, U, F>(jobs: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    jobs.into_iter().map(f).collect()
}

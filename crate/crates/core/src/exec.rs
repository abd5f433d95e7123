//! Sequential / data-parallel execution of independent per-index work.
//!
//! With the `parallel` feature (on by default) the parallel path runs on the
//! rayon global pool. Results are identical between the two paths: maps keep
//! index order and searches return the lowest matching index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// `(0..n).map(f).collect()`, order preserved.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// First `Some` in index order.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).find_map(f),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().find_map_first(f),
        }
    }
}

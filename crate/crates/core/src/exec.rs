//! Execution policy for the data-parallel loops (state sampling, θ sweeps,
//! optimizer restarts).
//!
//! Every task is a pure function of its index, and results are always
//! collected in index order, so both policies produce bit-identical output.
//! Without the `parallel` feature, [`Exec::Parallel`] runs sequentially.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Evaluates `f(0), …, f(n-1)` and returns the results in index order.
    pub fn map_indexed<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            Exec::Parallel => parallel_map(n, f),
        }
    }

    /// Like [`Exec::map_indexed`], stopping at the first error in index order.
    pub fn try_map_indexed<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map_indexed(n, f).into_iter().collect()
    }

    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Seed of the random stream owned by task `index`.
pub fn task_seed(master: u64, index: usize) -> u64 {
    master.wrapping_add(index as u64)
}

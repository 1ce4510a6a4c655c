//! Trial fan-out. With the `parallel` feature, work runs on a rayon pool;
//! without it every executor runs sequentially. Output order always
//! follows input order, so results never depend on the executor.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    /// `workers = 0` uses rayon's global pool.
    Parallel { workers: usize },
    /// Parallel on the global pool when available.
    #[default]
    Auto,
}

impl Executor {
    pub fn with_workers(workers: usize) -> Self {
        if workers == 1 {
            Executor::Sequential
        } else {
            Executor::Parallel { workers }
        }
    }

    /// Applies `f` to every index in `0..n`, returning results in index order.
    pub fn map_indexed<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Executor::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Auto => par_map(n, f),
            #[cfg(feature = "parallel")]
            Executor::Parallel { workers: 0 } => par_map(n, f),
            #[cfg(feature = "parallel")]
            Executor::Parallel { workers } => match rayon::ThreadPoolBuilder::new()
                .num_threads(*workers)
                .build()
            {
                Ok(pool) => pool.install(|| par_map(n, f)),
                Err(_) => (0..n).map(f).collect(),
            },
            #[cfg(not(feature = "parallel"))]
            _ => (0..n).map(f).collect(),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

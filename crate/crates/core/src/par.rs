//! Data-parallel maps over independent work items.
//!
//! With the `parallel` feature the maps run on a rayon pool sized by
//! [`Mode::Parallel`]; without it every mode runs sequentially. Results
//! always come back in input order.

use std::sync::mpsc::Sender;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel { jobs: usize },
}

impl Default for Mode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel { jobs: available_jobs() }
        } else {
            Mode::Sequential
        }
    }
}

impl Mode {
    pub fn with_jobs(jobs: usize) -> Self {
        if jobs <= 1 {
            Mode::Sequential
        } else {
            Mode::Parallel { jobs }
        }
    }

    pub fn jobs(&self) -> usize {
        match self {
            Mode::Sequential => 1,
            Mode::Parallel { jobs } => *jobs,
        }
    }
}

pub fn available_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[cfg(feature = "parallel")]
fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}

/// `items.map(f)` in input order.
pub fn map<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel { jobs } => {
            use rayon::prelude::*;
            pool(jobs).install(|| items.par_iter().map(&f).collect())
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Runs `f` on every item and sends each result as soon as it is ready.
/// Arrival order is unspecified in parallel mode.
pub fn send_each<T, R, F>(mode: Mode, items: &[T], tx: &Sender<R>, f: F)
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel { jobs } => {
            use rayon::prelude::*;
            pool(jobs).install(|| {
                items.par_iter().for_each_with(tx.clone(), |tx, item| {
                    let _ = tx.send(f(item));
                })
            })
        }
        _ => {
            for item in items {
                let _ = tx.send(f(item));
            }
        }
    }
}

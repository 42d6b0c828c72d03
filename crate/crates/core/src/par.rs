//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over the rayon global
//! pool. Without it, or when [`Execution::Sequential`] is requested, the same
//! closures run on the calling thread. Results never depend on the choice.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Sums `f(i)` over `0..count` for a fixed-width integer tally.
pub fn tally<const K: usize, F>(exec: Execution, count: u64, f: F) -> [u64; K]
where
    F: Fn(u64) -> usize + Sync + Send,
{
    let add = |mut acc: [u64; K], i: u64| {
        acc[f(i)] += 1;
        acc
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().fold(|| [0_u64; K], add).reduce(
            || [0_u64; K],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    }
    let _ = exec;
    (0..count).fold([0_u64; K], add)
}

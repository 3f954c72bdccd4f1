//! Execution policy for the data-parallel loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! global pool; without it, both variants run sequentially. Every parallel
//! loop in this crate produces bit-identical output to its sequential
//! counterpart: work items are independent and reductions are keyed on a total
//! order, never on arrival order.

/// Where to run a data-parallel loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// True when this policy actually fans out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Evaluates `f(0..n)` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Applies `f` to every element of `items`, then returns the minimum of the
    /// produced keys under `Ord`. Ties cannot depend on scheduling because the
    /// key itself must be totally ordered.
    pub fn update_min<T, K, F>(self, items: &mut [T], min_len: usize, f: F) -> Option<K>
    where
        T: Send,
        K: Ord + Send,
        F: Fn(usize, &mut T) -> K + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && items.len() >= min_len {
            use rayon::prelude::*;
            return items
                .par_iter_mut()
                .with_min_len(min_len)
                .enumerate()
                .map(|(i, item)| f(i, item))
                .min();
        }
        let _ = min_len;
        items.iter_mut().enumerate().map(|(i, item)| f(i, item)).min()
    }
}

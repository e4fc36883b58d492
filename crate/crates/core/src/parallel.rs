//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over rayon's global
//! pool; without it, or with [`Execution::Sequential`], everything runs on
//! the calling thread. Both paths must produce identical results, so
//! merges are required to be associative and order-independent.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Folds `range` into per-worker accumulators and merges them.
pub fn fold_range<T, I, F, M>(
    exec: Execution,
    range: Range<u64>,
    identity: I,
    fold: F,
    merge: M,
) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, u64) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(not(feature = "parallel"))]
    let _ = merge;
    match exec {
        Execution::Sequential => range.fold(identity(), fold),
        #[cfg(feature = "parallel")]
        Execution::Parallel => range
            .into_par_iter()
            .fold(&identity, &fold)
            .reduce(&identity, &merge),
    }
}

/// Order-preserving map.
pub fn map_vec<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_default_agree() {
        let sum = |exec| {
            fold_range(
                exec,
                0..10_000,
                || vec![0u64; 7],
                |mut acc, x| {
                    acc[(x % 7) as usize] += x;
                    acc
                },
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
        };
        assert_eq!(sum(Execution::Sequential), sum(Execution::default()));
        let squares = map_vec(Execution::default(), &[1u64, 2, 3], |x| x * x);
        assert_eq!(squares, vec![1, 4, 9]);
    }
}

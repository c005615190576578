//! Chunked scans over the allocation space.
//!
//! The space `[0, n^m)` is cut into fixed chunks. Each chunk is folded from
//! `identity()` in counter order, and chunk results are combined left to right
//! with `reduce`. Since the chunking does not depend on the executor, a
//! sequential and a parallel run perform the same folds and the same
//! reductions in the same order, so any associative `reduce` (min, max, first
//! witness) gives identical answers under both.

use crate::enumerate::{count, decode, increment};
use crate::error::Result;

/// Allocations per chunk.
pub const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

fn chunks(total: u64) -> u64 {
    total.div_ceil(CHUNK)
}

fn fold_chunk<A, F>(n: usize, m: usize, total: u64, c: u64, init: A, fold: &F) -> A
where
    F: Fn(A, u64, &[usize]) -> A,
{
    let lo = c * CHUNK;
    let hi = (lo + CHUNK).min(total);
    let mut a = vec![0; m];
    decode(n, lo, &mut a);
    let mut acc = init;
    for idx in lo..hi {
        acc = fold(acc, idx, &a);
        increment(n, &mut a);
    }
    acc
}

fn first_in_chunk<P>(n: usize, m: usize, total: u64, c: u64, pred: &P) -> Option<u64>
where
    P: Fn(u64, &[usize]) -> bool,
{
    let lo = c * CHUNK;
    let hi = (lo + CHUNK).min(total);
    let mut a = vec![0; m];
    decode(n, lo, &mut a);
    for idx in lo..hi {
        if pred(idx, &a) {
            return Some(idx);
        }
        increment(n, &mut a);
    }
    None
}

/// Folds every allocation and reduces chunk results in index order.
pub fn fold_reduce<A, I, F, R>(n: usize, m: usize, identity: I, fold: F, reduce: R) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64, &[usize]) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    fold_reduce_with(Exec::default(), n, m, identity, fold, reduce)
}

pub fn fold_reduce_with<A, I, F, R>(
    exec: Exec,
    n: usize,
    m: usize,
    identity: I,
    fold: F,
    reduce: R,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64, &[usize]) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    let total = count(n, m)?;
    let nchunks = chunks(total);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            Ok((0..nchunks)
                .into_par_iter()
                .map(|c| fold_chunk(n, m, total, c, identity(), &fold))
                .reduce(&identity, &reduce))
        }
        _ => Ok((0..nchunks)
            .map(|c| fold_chunk(n, m, total, c, identity(), &fold))
            .fold(identity(), &reduce)),
    }
}

/// Lowest enumeration index satisfying `pred`.
pub fn find_first<P>(n: usize, m: usize, pred: P) -> Result<Option<u64>>
where
    P: Fn(u64, &[usize]) -> bool + Sync + Send,
{
    find_first_with(Exec::default(), n, m, pred)
}

pub fn find_first_with<P>(exec: Exec, n: usize, m: usize, pred: P) -> Result<Option<u64>>
where
    P: Fn(u64, &[usize]) -> bool + Sync + Send,
{
    let total = count(n, m)?;
    let nchunks = chunks(total);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            Ok((0..nchunks)
                .into_par_iter()
                .find_map_first(|c| first_in_chunk(n, m, total, c, &pred)))
        }
        _ => Ok((0..nchunks).find_map(|c| first_in_chunk(n, m, total, c, &pred))),
    }
}

/// Keeps the larger key; on ties the earlier index wins.
pub fn better_first<K: Ord>(a: Option<(K, u64)>, b: Option<(K, u64)>) -> Option<(K, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::encode;

    fn sum_of_keys(exec: Exec, n: usize, m: usize) -> u64 {
        fold_reduce_with(
            exec,
            n,
            m,
            || 0u64,
            |acc, idx, a| {
                assert_eq!(encode(n, a), idx);
                acc + idx
            },
            |x, y| x + y,
        )
        .unwrap()
    }

    #[test]
    fn visits_every_index_once() {
        for (n, m) in [(1, 0), (1, 5), (2, 3), (3, 9), (4, 7)] {
            let total = count(n, m).unwrap();
            let expect = total * (total - 1) / 2;
            assert_eq!(sum_of_keys(Exec::Sequential, n, m), expect);
            assert_eq!(sum_of_keys(Exec::Parallel, n, m), expect);
        }
    }

    #[test]
    fn find_first_returns_lowest_index() {
        let pred = |idx: u64, a: &[usize]| a[0] == 2 && idx > 5000;
        let s = find_first_with(Exec::Sequential, 3, 10, pred).unwrap();
        let p = find_first_with(Exec::Parallel, 3, 10, pred).unwrap();
        assert_eq!(s, p);
        assert_eq!(s, Some(5003));
        assert_eq!(find_first(2, 3, |_, _| false).unwrap(), None);
    }

    #[test]
    fn argmax_ties_keep_earliest() {
        // key = number of items at agent 0; maximum at the all-zero assignment.
        let run = |exec| {
            fold_reduce_with(
                exec,
                3,
                8,
                || None,
                |best, idx, a| {
                    let key = a.iter().filter(|&&x| x == 1).count() / 2;
                    better_first(best, Some((key, idx)))
                },
                better_first,
            )
            .unwrap()
        };
        let s = run(Exec::Sequential);
        assert_eq!(s, run(Exec::Parallel));
        // First index with at least 8 items at agent 1 is the all-ones assignment.
        assert_eq!(s, Some((4, encode(3, &[1; 8]))));
    }
}

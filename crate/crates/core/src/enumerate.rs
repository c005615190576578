//! All `n^m` allocations as a base-`n` counter, item 0 least significant.

use crate::error::{Error, Result};
use crate::model::Allocation;

/// Largest search space any exhaustive routine will touch.
pub const MAX_ALLOCATIONS: u64 = 1 << 48;

/// `n^m`, or `TooLarge` past the guard.
pub fn count(n: usize, m: usize) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..m {
        total = total
            .checked_mul(n as u64)
            .filter(|&t| t <= MAX_ALLOCATIONS)
            .ok_or(Error::TooLarge { n, m })?;
    }
    Ok(total)
}

/// Writes the assignment with enumeration index `idx` into `out`.
pub fn decode(n: usize, mut idx: u64, out: &mut [usize]) {
    let base = n as u64;
    for slot in out.iter_mut() {
        *slot = (idx % base) as usize;
        idx /= base;
    }
}

pub fn encode(n: usize, assignment: &[usize]) -> u64 {
    assignment
        .iter()
        .rev()
        .fold(0u64, |acc, &a| acc * n as u64 + a as u64)
}

/// Advances to the next assignment in counter order.
#[inline]
pub fn increment(n: usize, assignment: &mut [usize]) {
    for slot in assignment.iter_mut() {
        *slot += 1;
        if *slot < n {
            return;
        }
        *slot = 0;
    }
}

pub fn allocation_at(n: usize, m: usize, idx: u64) -> Allocation {
    let mut a = vec![0; m];
    decode(n, idx, &mut a);
    Allocation::new(a)
}

/// Iterator over the index range `[lo, hi)`.
#[derive(Debug, Clone)]
pub struct Allocations {
    n: usize,
    next: u64,
    end: u64,
    current: Vec<usize>,
}

impl Iterator for Allocations {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.next >= self.end {
            return None;
        }
        let out = Allocation::new(self.current.clone());
        self.next += 1;
        increment(self.n, &mut self.current);
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Allocations {}

pub fn enumerate_allocations(n: usize, m: usize) -> Result<Allocations> {
    let total = count(n, m)?;
    enumerate_range(n, m, 0, total)
}

pub fn enumerate_range(n: usize, m: usize, lo: u64, hi: u64) -> Result<Allocations> {
    let total = count(n, m)?;
    let hi = hi.min(total);
    let lo = lo.min(hi);
    let mut current = vec![0; m];
    decode(n, lo, &mut current);
    Ok(Allocations {
        n,
        next: lo,
        end: hi,
        current,
    })
}

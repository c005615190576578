//! Per-allocation rules on scaled tables.
//!
//! Each rule returns `None` when the notion holds and a raw witness (indices
//! and the two scaled sides of the violated inequality) otherwise.

use crate::kernel::{Int, Tables};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Raw<T> {
    /// `lhs < rhs` where the definition needs `lhs >= rhs`.
    Pair {
        agent: usize,
        other: usize,
        item: Option<usize>,
        lhs: T,
        rhs: T,
    },
    /// `n * utility < total` style share violations are reported unscaled by `n`.
    Share {
        agent: usize,
        item: Option<usize>,
        utility: T,
        threshold: Threshold<T>,
    },
}

/// A threshold either as a scaled integer or as `total / n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Threshold<T> {
    Scaled(T),
    Fraction(T, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Level {
    Exact,
    UpToOne,
    UpToAny,
}

/// EF, EF1 and EFX: `h` is the holding matrix.
pub(crate) fn envy<T: Int>(t: &Tables<T>, a: &[usize], h: &[T], level: Level) -> Option<Raw<T>> {
    let n = t.n();
    for i in 0..n {
        let own = &h[i * n + i];
        for j in (0..n).filter(|&j| j != i) {
            let other = &h[i * n + j];
            if own >= other {
                continue;
            }
            let d = other.sub(own);
            let fail = match level {
                Level::Exact => Some(None),
                Level::UpToOne => {
                    let rescued = a.iter().enumerate().any(|(k, &b)| {
                        let g = t.gain(i, k);
                        (b == i && g.neg() >= d) || (b == j && *g >= d)
                    });
                    (!rescued).then_some(None)
                }
                Level::UpToAny => a.iter().enumerate().find_map(|(k, &b)| {
                    let g = t.gain(i, k);
                    let broken = (b == i && g.is_negative() && g.neg() < d)
                        || (b == j && !g.is_negative() && *g < d);
                    broken.then_some(Some(k))
                }),
            };
            if let Some(item) = fail {
                let (lhs, rhs) = match item {
                    Some(k) if a[k] == i => (own.sub(t.gain(i, k)), other.clone()),
                    Some(k) => (own.clone(), other.sub(t.gain(i, k))),
                    None => (own.clone(), other.clone()),
                };
                return Some(Raw::Pair {
                    agent: i,
                    other: j,
                    item,
                    lhs,
                    rhs,
                });
            }
        }
    }
    None
}

/// EQ, EQ1 and EQX on own utilities; items are judged by their owner.
pub(crate) fn equity<T: Int>(t: &Tables<T>, a: &[usize], own: &[T], level: Level) -> Option<Raw<T>> {
    let n = t.n();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if own[i] >= own[j] {
                continue;
            }
            let d = own[j].sub(&own[i]);
            let fail = match level {
                Level::Exact => Some(None),
                Level::UpToOne => {
                    let rescued = a.iter().enumerate().any(|(k, &b)| {
                        (b == i && t.gain(i, k).neg() >= d) || (b == j && *t.gain(j, k) >= d)
                    });
                    (!rescued).then_some(None)
                }
                Level::UpToAny => a.iter().enumerate().find_map(|(k, &b)| {
                    let broken = if b == i {
                        let g = t.gain(i, k);
                        g.is_negative() && g.neg() < d
                    } else if b == j {
                        let g = t.gain(j, k);
                        !g.is_negative() && *g < d
                    } else {
                        false
                    };
                    broken.then_some(Some(k))
                }),
            };
            if let Some(item) = fail {
                let (lhs, rhs) = match item {
                    Some(k) if a[k] == i => (own[i].sub(t.gain(i, k)), own[j].clone()),
                    Some(k) => (own[i].clone(), own[j].sub(t.gain(j, k))),
                    None => (own[i].clone(), own[j].clone()),
                };
                return Some(Raw::Pair {
                    agent: i,
                    other: j,
                    item,
                    lhs,
                    rhs,
                });
            }
        }
    }
    None
}

/// `n * u_i >= total_i` and its up-to-one-item relaxations.
pub(crate) fn proportional<T: Int>(
    t: &Tables<T>,
    a: &[usize],
    own: &[T],
    totals: &[T],
    level: Level,
) -> Option<Raw<T>> {
    let n = t.n();
    for i in 0..n {
        let scaled_own = own[i].mul_usize(n);
        if scaled_own >= totals[i] {
            continue;
        }
        let need = totals[i].sub(&scaled_own);
        let fail = match level {
            Level::Exact => Some(None),
            Level::UpToOne => {
                let rescued = a.iter().enumerate().any(|(k, &b)| {
                    let g = t.gain(i, k).mul_usize(n);
                    if b == i {
                        g.neg() >= need
                    } else {
                        g >= need
                    }
                });
                (!rescued).then_some(None)
            }
            Level::UpToAny => a.iter().enumerate().find_map(|(k, &b)| {
                let g = t.gain(i, k);
                let broken = if b == i {
                    g.is_negative() && g.neg().mul_usize(n) < need
                } else {
                    !g.is_negative() && g.mul_usize(n) < need
                };
                broken.then_some(Some(k))
            }),
        };
        if let Some(item) = fail {
            let utility = match item {
                Some(k) if a[k] == i => own[i].sub(t.gain(i, k)),
                Some(k) => own[i].add(t.gain(i, k)),
                None => own[i].clone(),
            };
            return Some(Raw::Share {
                agent: i,
                item,
                utility,
                threshold: Threshold::Fraction(totals[i].clone(), n),
            });
        }
    }
    None
}

/// `u_i >= theta_i` and the MMS1 / MMSX relaxations; `thr` holds ceilings of `theta_i * D`.
pub(crate) fn share<T: Int>(
    t: &Tables<T>,
    a: &[usize],
    own: &[T],
    thr: &[T],
    level: Level,
) -> Option<Raw<T>> {
    for i in 0..t.n() {
        if own[i] >= thr[i] {
            continue;
        }
        let fail = match level {
            Level::Exact => Some(None),
            Level::UpToOne => {
                let rescued = a.iter().enumerate().any(|(k, &b)| {
                    let g = t.gain(i, k);
                    if b == i {
                        own[i].sub(g) >= thr[i]
                    } else {
                        own[i].add(g) >= thr[i]
                    }
                });
                (!rescued).then_some(None)
            }
            Level::UpToAny => a.iter().enumerate().find_map(|(k, &b)| {
                let g = t.gain(i, k);
                let broken = if b == i {
                    g.is_negative() && own[i].sub(g) < thr[i]
                } else {
                    !g.is_negative() && own[i].add(g) < thr[i]
                };
                broken.then_some(Some(k))
            }),
        };
        if let Some(item) = fail {
            let utility = match item {
                Some(k) if a[k] == i => own[i].sub(t.gain(i, k)),
                Some(k) => own[i].add(t.gain(i, k)),
                None => own[i].clone(),
            };
            return Some(Raw::Share {
                agent: i,
                item,
                utility,
                threshold: Threshold::Scaled(thr[i].clone()),
            });
        }
    }
    None
}

/// `x` Pareto-dominates `y`.
#[inline]
pub(crate) fn dominates<T: Ord>(x: &[T], y: &[T]) -> bool {
    let mut strict = false;
    for (a, b) in x.iter().zip(y) {
        if a < b {
            return false;
        }
        strict |= a > b;
    }
    strict
}

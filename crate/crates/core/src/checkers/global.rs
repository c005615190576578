//! Notions that compare against every allocation: PO and welfare optima.

use num_bigint::BigInt;

use super::rules::dominates;
use super::{Notion, Verdict, Witness};
use crate::enumerate::{allocation_at, count};
use crate::error::Result;
use crate::kernel::{Int, Tables, Valuation};
use crate::model::Allocation;
use crate::scan::{better_first, find_first, fold_reduce};
use crate::with_tables;

/// Spaces up to this many allocations are indexed once per checker.
pub const INDEX_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Welfare {
    /// Sum of utilities.
    Utilitarian,
    /// Minimum utility.
    Egalitarian,
    /// Sorted utility vector, compared lexicographically.
    Leximin,
}

impl Welfare {
    fn of(notion: &Notion) -> Option<Welfare> {
        match notion {
            Notion::Muw => Some(Welfare::Utilitarian),
            Notion::Mew => Some(Welfare::Egalitarian),
            Notion::LeximinOpt => Some(Welfare::Leximin),
            _ => None,
        }
    }
}

/// Larger keys are better.
pub(crate) fn own_key<T: Int>(w: Welfare, own: &[T]) -> Vec<T> {
    match w {
        Welfare::Utilitarian => {
            let mut s = T::zero();
            for x in own {
                s.add_assign(x);
            }
            vec![s]
        }
        Welfare::Egalitarian => vec![own.iter().min().cloned().unwrap_or_else(T::zero)],
        Welfare::Leximin => {
            let mut v = own.to_vec();
            v.sort();
            v
        }
    }
}

/// Best key and its earliest allocation index.
pub(crate) fn argmax_welfare<T: Int>(t: &Tables<T>, w: Welfare) -> Result<(Vec<T>, u64)> {
    let (best, _) = fold_reduce(
        t.n(),
        t.m(),
        || (None, Vec::new()),
        |(best, mut own), idx, a| {
            t.own_into(a, &mut own);
            (better_first(best, Some((own_key(w, &own), idx))), own)
        },
        |(x, own), (y, _)| (better_first(x, y), own),
    )?;
    Ok(best.expect("at least one allocation"))
}

pub(crate) fn scan_check(val: &Valuation, notion: &Notion, alloc: &Allocation) -> Result<Verdict> {
    let (n, m) = (val.n(), val.m());
    with_tables!(val.scaled(), |t| {
        let own = t.own(alloc.assignment());
        match Welfare::of(notion) {
            None => {
                let hit = find_first(n, m, |_, b| dominates(&t.own(b), &own))?;
                Ok(match hit {
                    Some(idx) => Verdict::fail(Witness::Dominated {
                        by: allocation_at(n, m, idx),
                    }),
                    None => Verdict::pass(),
                })
            }
            Some(w) => {
                let (best, idx) = argmax_welfare(t, w)?;
                Ok(if own_key(w, &own) < best {
                    Verdict::fail(Witness::Better {
                        by: allocation_at(n, m, idx),
                    })
                } else {
                    Verdict::pass()
                })
            }
        }
    })
}

pub(crate) struct Index<T> {
    /// Undominated utility vectors with the first allocation attaining each.
    frontier: Vec<(Vec<T>, u64)>,
    best: [(Vec<T>, u64); 3],
}

pub(crate) enum GlobalIndex {
    Small(Index<i128>),
    Big(Index<BigInt>),
}

fn build<T: Int>(t: &Tables<T>) -> Result<Index<T>> {
    let n = t.n();
    count(n, t.m())?;
    let mut all: Vec<(Vec<T>, u64)> = fold_reduce(
        n,
        t.m(),
        Vec::new,
        |mut acc, idx, a| {
            acc.push((t.own(a), idx));
            acc
        },
        |mut x, y| {
            x.extend(y);
            x
        },
    )?;
    let best = [Welfare::Utilitarian, Welfare::Egalitarian, Welfare::Leximin].map(|w| {
        all.iter()
            .fold(None, |b, (own, idx)| better_first(b, Some((own_key(w, own), *idx))))
            .expect("at least one allocation")
    });
    // Distinct vectors keep their earliest index; dominators have a larger sum.
    all.sort();
    all.dedup_by(|later, first| later.0 == first.0);
    let sum = |v: &[T]| own_key(Welfare::Utilitarian, v).swap_remove(0);
    all.sort_by_key(|a| std::cmp::Reverse(sum(&a.0)));
    let mut frontier: Vec<(Vec<T>, u64)> = Vec::new();
    for (v, idx) in all {
        if !frontier.iter().any(|(f, _)| dominates(f, &v)) {
            frontier.push((v, idx));
        }
    }
    Ok(Index { frontier, best })
}

impl<T: Int> Index<T> {
    fn check(&self, t: &Tables<T>, notion: &Notion, alloc: &Allocation) -> Verdict {
        let (n, m) = (t.n(), t.m());
        let own = t.own(alloc.assignment());
        match Welfare::of(notion) {
            None => {
                let by = self
                    .frontier
                    .iter()
                    .filter(|(f, _)| dominates(f, &own))
                    .map(|(_, idx)| *idx)
                    .min();
                match by {
                    Some(idx) => Verdict::fail(Witness::Dominated {
                        by: allocation_at(n, m, idx),
                    }),
                    None => Verdict::pass(),
                }
            }
            Some(w) => {
                let (key, idx) = &self.best[w as usize];
                if own_key(w, &own) < *key {
                    Verdict::fail(Witness::Better {
                        by: allocation_at(n, m, *idx),
                    })
                } else {
                    Verdict::pass()
                }
            }
        }
    }
}

impl GlobalIndex {
    pub(crate) fn build(val: &Valuation) -> Result<GlobalIndex> {
        use crate::kernel::Scaled;
        Ok(match val.scaled() {
            Scaled::Small(t) => GlobalIndex::Small(build(t)?),
            Scaled::Big(t) => GlobalIndex::Big(build(t)?),
        })
    }

    pub(crate) fn check(&self, val: &Valuation, notion: &Notion, alloc: &Allocation) -> Result<Verdict> {
        use crate::kernel::Scaled;
        Ok(match (self, val.scaled()) {
            (GlobalIndex::Small(ix), Scaled::Small(t)) => ix.check(t, notion, alloc),
            (GlobalIndex::Big(ix), Scaled::Big(t)) => ix.check(t, notion, alloc),
            _ => unreachable!("index built from the same valuation"),
        })
    }
}

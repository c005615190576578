//! Allocation algorithms on 1-D instances and exhaustive optimizers.
//!
//! The polynomial algorithms run on `W`; their guarantees carry over to the
//! 2-D instance the `W` came from.

use num_bigint::BigInt;
use num_traits::One;

use crate::checkers::{argmax_welfare, Checker, Notion, Welfare};
use crate::enumerate::allocation_at;
use crate::error::{Error, Result};
use crate::kernel::{Int, Space, Tables, Valuation};
use crate::model::{Allocation, Instance1D, Instance2D, Kind};
use crate::rational::Rational;
use crate::scan::{better_first, find_first, fold_reduce};
use crate::with_tables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Muw,
    Mew,
    Leximin,
    /// Nash welfare on `W`: most agents with positive utility, then the
    /// largest product of their utilities.
    MnwOnW,
}

impl std::str::FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "muw" => Ok(Objective::Muw),
            "mew" => Ok(Objective::Mew),
            "leximin" => Ok(Objective::Leximin),
            "mnw" | "mnw-on-w" => Ok(Objective::MnwOnW),
            _ => Err(Error::Unsupported(format!("objective {s:?}"))),
        }
    }
}

/// Index of the largest value, lowest index on ties.
fn best_of<'a>(items: impl Iterator<Item = (usize, &'a Rational)>) -> Option<usize> {
    let mut best: Option<(usize, &Rational)> = None;
    for (k, x) in items {
        if best.is_none_or(|(_, b)| x > b) {
            best = Some((k, x));
        }
    }
    best.map(|(k, _)| k)
}

fn check_order(n: usize, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidInstance(format!("{order:?} is not a permutation of 0..{n}")));
        }
    }
    if order.len() != n {
        return Err(Error::InvalidInstance(format!("{order:?} is not a permutation of 0..{n}")));
    }
    Ok(())
}

fn uniform(inst: &Instance1D, what: &str) -> Result<Kind> {
    match inst.kind() {
        Kind::Mixed => Err(Error::MixedSigns(what.into())),
        k => Ok(k),
    }
}

/// Agents take turns picking their highest-valued remaining item.
pub fn round_robin(inst: &Instance1D, order: Option<&[usize]>) -> Result<Allocation> {
    uniform(inst, "round robin")?;
    let n = inst.n();
    let default: Vec<usize> = (0..n).collect();
    let order = order.unwrap_or(&default);
    check_order(n, order)?;
    let mut owner = vec![usize::MAX; inst.m()];
    for turn in 0..inst.m() {
        let i = order[turn % n];
        let pick = best_of((0..inst.m()).filter(|&k| owner[k] == usize::MAX).map(|k| (k, inst.w(i, k))))
            .expect("an item remains");
        owner[pick] = i;
    }
    Ok(Allocation::new(owner))
}

/// Two-phase round robin for mixed items.
///
/// Items every agent dislikes are picked round robin in order `0..n`, padded
/// with zero-valued dummies to a multiple of `n`. The rest are picked in
/// order `n-1..0`, repeatedly, each agent taking its favorite remaining item
/// if it values it positively. Items nobody values positively go to the
/// lowest-index agent valuing them at zero.
pub fn double_round_robin(inst: &Instance1D) -> Allocation {
    let (n, m) = (inst.n(), inst.m());
    let free = usize::MAX;
    let mut owner = vec![free; m];
    let negative: Vec<usize> = (0..m)
        .filter(|&k| (0..n).all(|i| inst.w(i, k).is_negative()))
        .collect();
    let zero = Rational::zero();
    let dummies = (n - negative.len() % n) % n;
    let mut pool: Vec<Option<usize>> = negative.iter().copied().map(Some).collect();
    pool.extend(std::iter::repeat_n(None, dummies));
    let mut turn = 0;
    while !pool.is_empty() {
        let i = turn % n;
        let pick = best_of(pool.iter().enumerate().map(|(p, item)| match item {
            Some(k) => (p, inst.w(i, *k)),
            None => (p, &zero),
        }))
        .expect("pool is not empty");
        if let Some(k) = pool.remove(pick) {
            owner[k] = i;
        }
        turn += 1;
    }
    loop {
        let mut picked = false;
        for i in (0..n).rev() {
            let pick = best_of(
                (0..m)
                    .filter(|&k| owner[k] == free && inst.w(i, k).is_positive())
                    .map(|k| (k, inst.w(i, k))),
            );
            if let Some(k) = pick {
                owner[k] = i;
                picked = true;
            }
        }
        if !picked {
            break;
        }
    }
    for (k, slot) in owner.iter_mut().enumerate().filter(|(_, o)| **o == free) {
        *slot = (0..n).find(|&i| inst.w(i, k).is_zero()).expect("item not disliked by all");
    }
    Allocation::new(owner)
}

/// Envy-cycle elimination for goods.
pub fn envy_cycle(inst: &Instance1D) -> Result<Allocation> {
    if uniform(inst, "envy cycle elimination")? != Kind::Goods {
        return Err(Error::MixedSigns("envy cycle elimination needs goods".into()));
    }
    let n = inst.n();
    // bundles[b] is held by agent holder[b]; values[i][b] = w_i(bundle b)
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut holder: Vec<usize> = (0..n).collect();
    let mut values = vec![vec![Rational::zero(); n]; n];
    let envies = |values: &[Vec<Rational>], holder: &[usize], i: usize, j: usize| {
        // agent holding bundle i envies bundle j
        values[holder[i]][j] > values[holder[i]][i]
    };
    for k in 0..inst.m() {
        loop {
            let free = (0..n).find(|&b| (0..n).all(|e| !envies(&values, &holder, e, b)));
            if let Some(b) = free {
                bundles[b].push(k);
                for (i, row) in values.iter_mut().enumerate() {
                    row[b] += inst.w(i, k);
                }
                break;
            }
            // Every bundle is envied; walk back along enviers to a cycle.
            let mut path = vec![0usize];
            let start = loop {
                let cur = *path.last().expect("non-empty");
                let prev = (0..n).find(|&e| envies(&values, &holder, e, cur)).expect("envied");
                if let Some(pos) = path.iter().position(|&x| x == prev) {
                    break pos;
                }
                path.push(prev);
            };
            let cycle = &path[start..];
            // cycle[t + 1] envies cycle[t]: its holder moves to bundle cycle[t].
            let old = holder.clone();
            for t in 0..cycle.len() {
                let from = cycle[(t + 1) % cycle.len()];
                holder[cycle[t]] = old[from];
            }
        }
    }
    let mut owner = vec![0; inst.m()];
    for (b, items) in bundles.iter().enumerate() {
        for &k in items {
            owner[k] = holder[b];
        }
    }
    Ok(Allocation::new(owner))
}

/// Bag filling against exact shares: every agent gets at least half its `mu_w`.
pub fn bag_fill_half_mms(inst: &Instance1D, mu_w: &[Rational]) -> Result<Allocation> {
    if uniform(inst, "bag filling")? != Kind::Goods {
        return Err(Error::MixedSigns("bag filling needs goods".into()));
    }
    let (n, m) = (inst.n(), inst.m());
    if mu_w.len() != n {
        return Err(Error::MissingProfile);
    }
    let two = Rational::from_integer(2);
    let half: Vec<Rational> = mu_w.iter().map(|x| x / &two).collect();
    let free = usize::MAX;
    let mut owner = vec![free; m];
    let mut waiting: Vec<usize> = (0..n).collect();
    let mut last = None;
    // Single items worth half a share are handed out first.
    while let Some((i, k)) = waiting
        .iter()
        .flat_map(|&i| (0..m).map(move |k| (i, k)))
        .find(|&(i, k)| owner[k] == free && *inst.w(i, k) >= half[i])
    {
        owner[k] = i;
        waiting.retain(|&x| x != i);
        last = Some(i);
    }
    let mut order: Vec<usize> = (0..m).filter(|&k| owner[k] == free).collect();
    order.sort_by(|&a, &b| inst.w(0, b).cmp(inst.w(0, a)).then(a.cmp(&b)));
    let mut items = order.into_iter().peekable();
    while !waiting.is_empty() {
        let mut bag = Vec::new();
        let mut worth = vec![Rational::zero(); n];
        let taker = loop {
            if let Some(&i) = waiting.iter().find(|&&i| worth[i] >= half[i]) {
                break Some(i);
            }
            match items.next() {
                Some(k) => {
                    bag.push(k);
                    for (i, x) in worth.iter_mut().enumerate() {
                        *x += inst.w(i, k);
                    }
                }
                None => break None,
            }
        };
        let Some(i) = taker else {
            // Unreachable with exact shares; keep the items with someone.
            let i = waiting[0];
            for k in bag {
                owner[k] = i;
            }
            waiting.remove(0);
            last = Some(i);
            continue;
        };
        for k in bag {
            owner[k] = i;
        }
        waiting.retain(|&x| x != i);
        last = Some(i);
    }
    let sink = last.unwrap_or(0);
    for k in items {
        owner[k] = sink;
    }
    for slot in owner.iter_mut().filter(|o| **o == free) {
        *slot = sink;
    }
    Ok(Allocation::new(owner))
}

fn nash_key<T: Int>(own: &[T]) -> Vec<BigInt> {
    let mut count = 0u64;
    let mut product = BigInt::one();
    for u in own.iter().filter(|u| u.is_positive()) {
        count += 1;
        product *= u.to_big();
    }
    vec![BigInt::from(count), product]
}

fn argmax_nash<T: Int>(t: &Tables<T>) -> Result<u64> {
    let (best, _) = fold_reduce(
        t.n(),
        t.m(),
        || (None, Vec::new()),
        |(best, mut own), idx, a| {
            t.own_into(a, &mut own);
            (better_first(best, Some((nash_key(&own), idx))), own)
        },
        |(x, own), (y, _)| (better_first(x, y), own),
    )?;
    Ok(best.expect("at least one allocation").1)
}

/// Optimum of `objective` over all allocations, earliest in enumeration order on ties.
pub fn exhaustive_opt_val(val: &Valuation, objective: Objective) -> Result<Allocation> {
    let welfare = match objective {
        Objective::Muw => Welfare::Utilitarian,
        Objective::Mew => Welfare::Egalitarian,
        Objective::Leximin => Welfare::Leximin,
        Objective::MnwOnW => {
            if val.space() != Space::W || val.kind() != Kind::Goods {
                return Err(Error::MixedSigns("Nash welfare needs goods in W".into()));
            }
            let idx = with_tables!(val.scaled(), |t| argmax_nash(t))?;
            return Ok(allocation_at(val.n(), val.m(), idx));
        }
    };
    let idx = with_tables!(val.scaled(), |t| argmax_welfare(t, welfare).map(|(_, idx)| idx))?;
    Ok(allocation_at(val.n(), val.m(), idx))
}

/// Like [`exhaustive_opt_val`]; Nash welfare is always taken on `W`.
pub fn exhaustive_opt(inst: &Instance2D, objective: Objective, space: Space) -> Result<Allocation> {
    let space = if objective == Objective::MnwOnW { Space::W } else { space };
    exhaustive_opt_val(&Valuation::of(inst, space)?, objective)
}

/// First allocation in enumeration order satisfying every notion.
pub fn search_predicate_with(checker: &Checker, notions: &[Notion]) -> Result<Option<Allocation>> {
    let val = checker.valuation();
    let (n, m) = (val.n(), val.m());
    if notions.iter().any(Notion::needs_profile) {
        checker.view()?;
    }
    // Surface errors (wrong space, bad alpha) before scanning.
    let first = allocation_at(n, m, 0);
    checker.check_all(notions, &first)?;
    let hit = find_first(n, m, |_, a| {
        let alloc = Allocation::new(a.to_vec());
        notions
            .iter()
            .all(|notion| checker.check(notion, &alloc).is_ok_and(|v| v.holds))
    })?;
    Ok(hit.map(|idx| allocation_at(n, m, idx)))
}

pub fn search_predicate(inst: &Instance2D, notions: &[Notion], space: Space) -> Result<Option<Allocation>> {
    search_predicate_with(&Checker::new(inst, space)?, notions)
}

/// Named algorithm choices, as accepted on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algorithm {
    RoundRobin,
    DoubleRoundRobin,
    EnvyCycle,
    BagFillHalfMms,
    Exhaustive(Objective),
    PredicateSearch(Vec<Notion>),
}

impl Algorithm {
    /// Notions the algorithm's output is promised to satisfy, per space.
    pub fn advertised(&self, space: Space) -> Vec<Notion> {
        let half = Rational::new(1, 2);
        match self {
            Algorithm::RoundRobin | Algorithm::DoubleRoundRobin | Algorithm::EnvyCycle => vec![Notion::Ef1],
            Algorithm::BagFillHalfMms => match space {
                Space::W => vec![Notion::AlphaMms(half)],
                _ => vec![Notion::ShiftedAlphaMms(half)],
            },
            Algorithm::Exhaustive(Objective::Muw) => vec![Notion::Muw, Notion::Po],
            Algorithm::Exhaustive(Objective::Mew) => vec![Notion::Mew],
            Algorithm::Exhaustive(Objective::Leximin) => vec![Notion::LeximinOpt, Notion::Po],
            Algorithm::Exhaustive(Objective::MnwOnW) => vec![Notion::Ef1, Notion::Po],
            Algorithm::PredicateSearch(ns) => ns.clone(),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    /// `round-robin`, `double-round-robin`, `envy-cycle`, `bag-fill-half-mms`,
    /// `exhaustive:<objective>`, `search:<notion>,<notion>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        if let Some(obj) = key.strip_prefix("exhaustive:") {
            return Ok(Algorithm::Exhaustive(obj.parse()?));
        }
        if let Some(list) = key.strip_prefix("search:") {
            let notions = list
                .split(',')
                .filter(|x| !x.is_empty())
                .map(str::parse)
                .collect::<Result<_>>()?;
            return Ok(Algorithm::PredicateSearch(notions));
        }
        match key.as_str() {
            "round-robin" => Ok(Algorithm::RoundRobin),
            "double-round-robin" => Ok(Algorithm::DoubleRoundRobin),
            "envy-cycle" => Ok(Algorithm::EnvyCycle),
            "bag-fill-half-mms" => Ok(Algorithm::BagFillHalfMms),
            _ => Err(Error::Unsupported(format!("algorithm {s:?}"))),
        }
    }
}

//! Maximin shares by exhaustive partition search.

mod alpha;
mod surd;

pub use alpha::{best_alpha, AlphaStar, AlphaVariant, BestAlpha, Coeffs};
pub use surd::Surd;

use serde::{Deserialize, Serialize};

use crate::enumerate::allocation_at;
use crate::error::{Error, Result};
use crate::kernel::{Int, Space, Tables, Valuation};
use crate::model::{Allocation, Instance1D, Instance2D, Kind};
use crate::rational::Rational;
use crate::scan::{better_first, fold_reduce};
use crate::with_tables;

/// One agent's share data in both spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentShare {
    pub mu_v: Rational,
    pub mu_w: Rational,
    /// `v'_i(M)`.
    pub shift: Rational,
    /// First optimal partition in enumeration order.
    pub partition: Allocation,
    /// Lowest-index bundle of `partition` attaining the share.
    pub min_bundle: usize,
    /// `None` on mixed instances.
    pub mu_plus: Option<Rational>,
    pub mu_minus: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MmsProfile {
    pub kind: Kind,
    pub agents: Vec<AgentShare>,
}

/// Share data of one space, as consumed by the checkers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareView {
    pub space: Space,
    pub kind: Kind,
    pub mu: Vec<Rational>,
    /// Zero in `W`.
    pub shift: Vec<Rational>,
    pub mu_plus: Vec<Option<Rational>>,
    pub mu_minus: Vec<Option<Rational>>,
}

/// Per agent, the best (largest min-bundle value, earliest index) partition.
fn maximin_scan<T: Int>(t: &Tables<T>) -> Result<Vec<(T, u64)>> {
    let n = t.n();
    type Acc<T> = (Vec<Option<(T, u64)>>, Vec<T>);
    let (best, _): Acc<T> = fold_reduce(
        n,
        t.m(),
        || (vec![None; n], Vec::new()),
        |(mut best, mut h), idx, a| {
            t.holding_into(a, &mut h);
            for (i, slot) in best.iter_mut().enumerate() {
                let row = &h[i * n..(i + 1) * n];
                let low = row.iter().min().expect("n >= 1").clone();
                *slot = better_first(slot.take(), Some((low, idx)));
            }
            (best, h)
        },
        |(x, h), (y, _)| {
            let merged = x.into_iter().zip(y).map(|(a, b)| better_first(a, b)).collect();
            (merged, h)
        },
    )?;
    Ok(best.into_iter().map(|b| b.expect("at least one allocation")).collect())
}

/// `(mu_i, partition index)` for every agent in the valuation's space.
fn shares(val: &Valuation) -> Result<Vec<(Rational, u64)>> {
    with_tables!(val.scaled(), |t| {
        Ok(maximin_scan(t)?
            .into_iter()
            .map(|(x, idx)| (val.unscale(&x), idx))
            .collect())
    })
}

fn min_bundle(val: &Valuation, agent: usize, part: &Allocation, mu: &Rational) -> usize {
    (0..val.n())
        .find(|&j| val.holding(agent, |k| part.owner(k) == j) == *mu)
        .expect("the share is attained")
}

/// Exact maximin share of `agent` in `space` with its canonical partition.
pub fn mms_share(inst: &Instance2D, agent: usize, space: Space) -> Result<(Rational, Allocation)> {
    if agent >= inst.n() {
        return Err(Error::InvalidInstance(format!("no agent {agent}")));
    }
    let val = Valuation::of(inst, space)?;
    let (mu, idx) = shares(&val)?.swap_remove(agent);
    Ok((mu, allocation_at(inst.n(), inst.m(), idx)))
}

/// Splits `mu_V` along the canonical minimum bundle `B*`.
pub fn mms_decompose(inst: &Instance2D, agent: usize, profile: &MmsProfile) -> Result<(Rational, Rational)> {
    let share = profile
        .agents
        .get(agent)
        .ok_or_else(|| Error::InvalidInstance(format!("no agent {agent}")))?;
    decompose(inst, agent, profile.kind, &share.partition, share.min_bundle)
}

fn decompose(
    inst: &Instance2D,
    agent: usize,
    kind: Kind,
    part: &Allocation,
    bundle: usize,
) -> Result<(Rational, Rational)> {
    let (mut inside, mut outside) = (Rational::zero(), Rational::zero());
    for k in 0..inst.m() {
        if part.owner(k) == bundle {
            inside += inst.v(agent, k);
        } else {
            outside += inst.vprime(agent, k);
        }
    }
    match kind {
        Kind::Goods => Ok((inside, outside)),
        Kind::Chores => Ok((outside, inside)),
        Kind::Mixed => Err(Error::Unsupported("share decomposition on mixed instances".into())),
    }
}

impl MmsProfile {
    /// Runs one scan per space; `mu_w` does not reuse `mu_v`.
    pub fn compute(inst: &Instance2D) -> Result<MmsProfile> {
        let kind = crate::model::classify(inst).kind;
        let v = Valuation::v(inst);
        let w = Valuation::of(inst, Space::W)?;
        let in_v = shares(&v)?;
        let in_w = shares(&w)?;
        let agents = in_v
            .into_iter()
            .zip(in_w)
            .enumerate()
            .map(|(i, ((mu_v, idx), (mu_w, _)))| {
                let partition = allocation_at(inst.n(), inst.m(), idx);
                let min_bundle = min_bundle(&v, i, &partition, &mu_v);
                let (mu_plus, mu_minus) = match decompose(inst, i, kind, &partition, min_bundle) {
                    Ok((p, m)) => (Some(p), Some(m)),
                    Err(_) => (None, None),
                };
                AgentShare {
                    mu_v,
                    mu_w,
                    shift: inst.vprime_total(i),
                    partition,
                    min_bundle,
                    mu_plus,
                    mu_minus,
                }
            })
            .collect();
        Ok(MmsProfile { kind, agents })
    }

    pub fn view(&self, space: Space) -> Result<ShareView> {
        let pick = |f: &dyn Fn(&AgentShare) -> Option<Rational>| -> Vec<Option<Rational>> {
            self.agents.iter().map(f).collect()
        };
        match space {
            Space::V => Ok(ShareView {
                space,
                kind: self.kind,
                mu: self.agents.iter().map(|a| a.mu_v.clone()).collect(),
                shift: self.agents.iter().map(|a| a.shift.clone()).collect(),
                mu_plus: pick(&|a| a.mu_plus.clone()),
                mu_minus: pick(&|a| a.mu_minus.clone()),
            }),
            Space::W => Ok(ShareView::one_d(
                self.kind,
                self.agents.iter().map(|a| a.mu_w.clone()).collect(),
            )),
            Space::Full => Err(Error::WrongSpace {
                notion: "mms".into(),
                space: "FULL".into(),
            }),
        }
    }
}

impl ShareView {
    /// In `W` all value sits on the received side.
    fn one_d(kind: Kind, mu: Vec<Rational>) -> ShareView {
        let split = |m: &Rational| match kind {
            Kind::Goods => (Some(m.clone()), Some(Rational::zero())),
            Kind::Chores => (Some(Rational::zero()), Some(m.clone())),
            Kind::Mixed => (None, None),
        };
        let (mu_plus, mu_minus) = mu.iter().map(split).unzip();
        ShareView {
            space: Space::W,
            kind,
            shift: vec![Rational::zero(); mu.len()],
            mu,
            mu_plus,
            mu_minus,
        }
    }

    pub fn of_one_d(inst: &Instance1D) -> Result<ShareView> {
        let mu = shares(&Valuation::w(inst))?.into_iter().map(|(m, _)| m).collect();
        Ok(ShareView::one_d(inst.kind(), mu))
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }
}

/// `mu_V = mu_W + v'(M)` with both shares from independent scans.
pub fn verify_shift_identity(inst: &Instance2D, profile: &MmsProfile) -> bool {
    profile.agents.len() == inst.n()
        && profile
            .agents
            .iter()
            .enumerate()
            .all(|(i, a)| a.mu_v == &a.mu_w + &inst.vprime_total(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    pub(crate) fn correlated_goods() -> Instance2D {
        let v = ["0.5", "0.5", "0.3", "0.5", "0.5", "0.5"];
        let row: Vec<_> = v.iter().map(|x| q(x)).collect();
        Instance2D::from_rows(vec![row; 2], vec![vec![q("0.1"); 6]; 2]).unwrap()
    }

    fn example5() -> Instance2D {
        Instance2D::from_rows(
            vec![vec![q("-40"), q("-110"), q("-109")]; 2],
            vec![vec![q("-36"), q("-70"), q("-71")]; 2],
        )
        .unwrap()
    }

    #[test]
    fn correlated_goods_shares() {
        let p = MmsProfile::compute(&correlated_goods()).unwrap();
        for a in &p.agents {
            assert_eq!(a.mu_w, q("1"));
            assert_eq!(a.mu_v, q("8/5"));
        }
        assert!(verify_shift_identity(&correlated_goods(), &p));
    }

    #[test]
    fn example5_shares() {
        let inst = example5();
        let (mu_w, _) = mms_share(&inst, 0, Space::W).unwrap();
        let (mu_v, part) = mms_share(&inst, 0, Space::V).unwrap();
        assert_eq!(mu_w, q("-42"));
        assert_eq!(mu_v, q("-219"));
        let p = MmsProfile::compute(&inst).unwrap();
        assert_eq!(p.agents[0].partition, part);
        assert!(verify_shift_identity(&inst, &p));
        let (plus, minus) = mms_decompose(&inst, 0, &p).unwrap();
        assert_eq!(plus + minus, q("-219"));
    }

    #[test]
    fn single_agent_gets_everything() {
        let inst = Instance2D::from_rows(vec![vec![q("2"), q("-1/2")]], vec![vec![q("1"), q("0")]]).unwrap();
        let (mu, part) = mms_share(&inst, 0, Space::V).unwrap();
        assert_eq!(mu, q("3/2"));
        assert_eq!(part.assignment(), &[0, 0]);
    }

    #[test]
    fn no_externality_goods_decomposition() {
        let inst = Instance2D::from_rows(
            vec![vec![q("3"), q("1"), q("2")]; 2],
            vec![vec![q("0"); 3]; 2],
        )
        .unwrap();
        let p = MmsProfile::compute(&inst).unwrap();
        for (i, a) in p.agents.iter().enumerate() {
            assert_eq!(a.mu_v, q("3"));
            assert_eq!(mms_decompose(&inst, i, &p).unwrap(), (q("3"), q("0")));
        }
    }

    #[test]
    fn mixed_has_no_decomposition() {
        let inst = Instance2D::from_rows(vec![vec![q("1"), q("-1")]; 2], vec![vec![q("0"); 2]; 2]).unwrap();
        let p = MmsProfile::compute(&inst).unwrap();
        assert!(p.agents[0].mu_plus.is_none());
        assert!(matches!(mms_decompose(&inst, 0, &p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn w_view_puts_share_on_one_side() {
        let p = MmsProfile::compute(&example5()).unwrap();
        let w = p.view(Space::W).unwrap();
        assert_eq!(w.mu_plus[0], Some(q("0")));
        assert_eq!(w.mu_minus[0], Some(q("-42")));
        assert!(w.shift.iter().all(Rational::is_zero));
    }
}

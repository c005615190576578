//! Fairness and efficiency checks with violation witnesses.

mod fullext;
mod global;
mod notion;
pub(crate) mod rules;

pub use fullext::{check_full, search_fullext_gap, GapDirection, GapInstance};
pub use global::{Welfare, INDEX_LIMIT};
pub use notion::{Notion, NOTION_NAMES};

pub(crate) use global::argmax_welfare;

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{Int, Space, Tables, Valuation};
use crate::mms::{AlphaVariant, MmsProfile, ShareView};
use crate::model::{Allocation, Instance1D, Instance2D};
use crate::rational::Rational;
use crate::with_tables;
use global::GlobalIndex;
use rules::{Level, Raw, Threshold};

/// A violated inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Witness {
    /// Between two agents: `lhs < rhs` although the notion needs `lhs >= rhs`.
    /// With `item`, the sides are evaluated after moving that item as the
    /// notion prescribes.
    Pair {
        agent: usize,
        other: usize,
        item: Option<usize>,
        lhs: Rational,
        rhs: Rational,
    },
    /// `utility < threshold` for one agent.
    Share {
        agent: usize,
        item: Option<usize>,
        utility: Rational,
        threshold: Rational,
    },
    /// An allocation that Pareto-dominates the checked one.
    Dominated { by: Allocation },
    /// An allocation with strictly better welfare.
    Better { by: Allocation },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(w: Witness) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(w),
        }
    }
}

enum Source {
    TwoD(Instance2D),
    OneD(Instance1D),
}

/// Evaluates notions on one instance in one space, caching the share
/// profile and the allocation index between calls.
pub struct Checker {
    source: Source,
    val: Valuation,
    view: OnceLock<Result<ShareView>>,
    index: OnceLock<Result<GlobalIndex>>,
}

impl Checker {
    pub fn new(inst: &Instance2D, space: Space) -> Result<Checker> {
        Ok(Checker {
            val: Valuation::of(inst, space)?,
            source: Source::TwoD(inst.clone()),
            view: OnceLock::new(),
            index: OnceLock::new(),
        })
    }

    /// A native 1-D instance, evaluated in `W`.
    pub fn one_d(inst: &Instance1D) -> Checker {
        Checker {
            val: Valuation::w(inst),
            source: Source::OneD(inst.clone()),
            view: OnceLock::new(),
            index: OnceLock::new(),
        }
    }

    /// Supplies share data instead of computing it on first use.
    pub fn with_view(self, view: ShareView) -> Result<Checker> {
        if view.space != self.val.space() || view.n() != self.val.n() {
            return Err(Error::MissingProfile);
        }
        let _ = self.view.set(Ok(view));
        Ok(self)
    }

    pub fn with_profile(self, profile: &MmsProfile) -> Result<Checker> {
        let view = profile.view(self.val.space())?;
        self.with_view(view)
    }

    pub fn space(&self) -> Space {
        self.val.space()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.val
    }

    pub fn view(&self) -> Result<&ShareView> {
        self.view
            .get_or_init(|| match &self.source {
                Source::TwoD(inst) => MmsProfile::compute(inst)?.view(self.val.space()),
                Source::OneD(inst) => ShareView::of_one_d(inst),
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn index(&self) -> Result<&GlobalIndex> {
        self.index
            .get_or_init(|| GlobalIndex::build(&self.val))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn check(&self, notion: &Notion, alloc: &Allocation) -> Result<Verdict> {
        self.val.check_alloc(alloc)?;
        if notion.is_global() {
            return self.global(notion, alloc);
        }
        let exact = self.exact_thresholds(notion)?;
        with_tables!(self.val.scaled(), |t| {
            let raw = self.local(t, notion, alloc.assignment(), exact.as_deref())?;
            Ok(match raw {
                None => Verdict::pass(),
                Some(r) => Verdict::fail(self.witness(r, exact.as_deref())),
            })
        })
    }

    /// Checks several notions, stopping at the first error.
    pub fn check_all(&self, notions: &[Notion], alloc: &Allocation) -> Result<Vec<Verdict>> {
        notions.iter().map(|n| self.check(n, alloc)).collect()
    }

    fn wrong_space(&self, notion: &Notion) -> Error {
        Error::WrongSpace {
            notion: notion.name().into(),
            space: self.val.space().to_string(),
        }
    }

    /// Exact rational thresholds of the share notions.
    fn exact_thresholds(&self, notion: &Notion) -> Result<Option<Vec<Rational>>> {
        let variant = match notion {
            Notion::AvgShare => {
                return match self.val.avg_share() {
                    Some(avg) => Ok(Some(avg.to_vec())),
                    None => Err(self.wrong_space(notion)),
                }
            }
            Notion::Mms | Notion::Mms1 | Notion::Mmsx => return Ok(Some(self.view()?.mu.clone())),
            Notion::AlphaMms(_) => AlphaVariant::Alpha,
            Notion::ShiftedAlphaMms(_) => AlphaVariant::Shifted,
            Notion::AlphaMmsI(_) => AlphaVariant::I,
            Notion::AlphaMmsII(_) => AlphaVariant::II,
            _ => return Ok(None),
        };
        let alpha = notion.alpha().expect("alpha notions carry alpha");
        Ok(Some(variant.thresholds(self.view()?, alpha)?))
    }

    fn local<T: Int>(
        &self,
        t: &Tables<T>,
        notion: &Notion,
        a: &[usize],
        exact: Option<&[Rational]>,
    ) -> Result<Option<Raw<T>>> {
        let level = match notion {
            Notion::Ef | Notion::Eq | Notion::Prop | Notion::PropE => Level::Exact,
            Notion::Ef1 | Notion::Eq1 | Notion::Prop1E | Notion::Mms1 => Level::UpToOne,
            Notion::Efx | Notion::Eqx | Notion::PropxE | Notion::Mmsx => Level::UpToAny,
            _ => Level::Exact,
        };
        Ok(match notion {
            Notion::Ef | Notion::Ef1 | Notion::Efx => {
                let mut h = Vec::new();
                t.holding_into(a, &mut h);
                rules::envy(t, a, &h, level)
            }
            Notion::Eq | Notion::Eq1 | Notion::Eqx => rules::equity(t, a, &t.own(a), level),
            Notion::Prop if self.val.space() != Space::W => return Err(self.wrong_space(notion)),
            Notion::Prop | Notion::PropE | Notion::Prop1E | Notion::PropxE => {
                let totals: Vec<T> = (0..t.n()).map(|i| t.bundle_total(i)).collect();
                rules::proportional(t, a, &t.own(a), &totals, level)
            }
            _ => {
                let exact = exact.expect("share notions have thresholds");
                let thr: Vec<T> = exact
                    .iter()
                    .map(|x| t.threshold(&self.val.ceil_scaled(x)))
                    .collect();
                rules::share(t, a, &t.own(a), &thr, level)
            }
        })
    }

    fn witness<T: Int>(&self, raw: Raw<T>, exact: Option<&[Rational]>) -> Witness {
        let un = |x: &T| self.val.unscale(x);
        match raw {
            Raw::Pair {
                agent,
                other,
                item,
                lhs,
                rhs,
            } => Witness::Pair {
                agent,
                other,
                item,
                lhs: un(&lhs),
                rhs: un(&rhs),
            },
            Raw::Share {
                agent,
                item,
                utility,
                threshold,
            } => Witness::Share {
                agent,
                item,
                utility: un(&utility),
                threshold: match (threshold, exact) {
                    (Threshold::Fraction(total, n), _) => un(&total) / Rational::from_integer(n as i64),
                    (Threshold::Scaled(_), Some(ex)) => ex[agent].clone(),
                    (Threshold::Scaled(x), None) => un(&x),
                },
            },
        }
    }

    fn global(&self, notion: &Notion, alloc: &Allocation) -> Result<Verdict> {
        let n = self.val.n();
        let m = self.val.m();
        if crate::enumerate::count(n, m)? <= INDEX_LIMIT {
            return self.index()?.check(&self.val, notion, alloc);
        }
        global::scan_check(&self.val, notion, alloc)
    }
}

/// One-shot check of `notion` on a 2-D instance in `V` or `W`.
pub fn check(inst: &Instance2D, space: Space, notion: &Notion, alloc: &Allocation) -> Result<Verdict> {
    Checker::new(inst, space)?.check(notion, alloc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn intro() -> Instance2D {
        Instance2D::from_rows(
            vec![vec![q("6"), q("5")], vec![q("5"), q("6")]],
            vec![vec![q("-1"), q("-100")], vec![q("-100"), q("-1")]],
        )
        .unwrap()
    }

    fn one_d_intro() -> Instance1D {
        Instance1D::from_rows(vec![vec![q("6"), q("5")], vec![q("5"), q("6")]]).unwrap()
    }

    #[test]
    fn intro_envy() {
        let a = Allocation::new(vec![0, 1]);
        let w = Checker::one_d(&one_d_intro());
        assert!(w.check(&Notion::Ef, &a).unwrap().holds);
        let v = check(&intro(), Space::V, &Notion::Ef, &a).unwrap();
        assert!(!v.holds);
        // u_1(A_1) = 6 - 100, u_1(A_2) = 5 - 1
        assert_eq!(
            v.witness,
            Some(Witness::Pair {
                agent: 0,
                other: 1,
                item: None,
                lhs: q("-94"),
                rhs: q("4"),
            })
        );
    }

    #[test]
    fn intro_prop_is_one_d_only() {
        // g2 to agent 1, g1 to agent 2: envy-free once externalities count
        let a = Allocation::new(vec![1, 0]);
        assert!(check(&intro(), Space::V, &Notion::Ef, &a).unwrap().holds);
        let w = Checker::one_d(&one_d_intro());
        let p = w.check(&Notion::Prop, &a).unwrap();
        assert_eq!(
            p.witness,
            Some(Witness::Share {
                agent: 0,
                item: None,
                utility: q("5"),
                threshold: q("11/2"),
            })
        );
        assert!(matches!(
            check(&intro(), Space::V, &Notion::Prop, &a),
            Err(Error::WrongSpace { .. })
        ));
        assert!(matches!(
            Checker::one_d(&one_d_intro()).check(&Notion::AvgShare, &a),
            Err(Error::WrongSpace { .. })
        ));
    }

    #[test]
    fn single_agent_always_fair() {
        let inst = Instance2D::from_rows(vec![vec![q("-3"), q("2")]], vec![vec![q("7"), q("1")]]).unwrap();
        let a = Allocation::new(vec![0, 0]);
        for space in [Space::V, Space::W] {
            let c = Checker::new(&inst, space).unwrap();
            for n in [Notion::Ef, Notion::Ef1, Notion::Efx, Notion::Eq, Notion::PropE, Notion::Mms] {
                assert!(c.check(&n, &a).unwrap().holds, "{n} in {space}");
            }
        }
        let avg = check(&inst, Space::V, &Notion::AvgShare, &a).unwrap();
        assert!(avg.holds);
    }

    #[test]
    fn bad_allocation_rejected() {
        let c = Checker::new(&intro(), Space::V).unwrap();
        assert!(matches!(
            c.check(&Notion::Ef, &Allocation::new(vec![0, 2])),
            Err(Error::InvalidAllocation(_))
        ));
        assert!(matches!(
            c.check(&Notion::Ef, &Allocation::new(vec![0])),
            Err(Error::InvalidAllocation(_))
        ));
    }

    #[test]
    fn equal_split_is_proportional() {
        let inst = Instance1D::from_rows(vec![vec![q("2"); 3]; 3]).unwrap();
        let c = Checker::one_d(&inst);
        assert!(c.check(&Notion::Prop, &Allocation::new(vec![0, 1, 2])).unwrap().holds);
    }

    #[test]
    fn alpha_one_is_mms() {
        let inst = Instance2D::from_rows(
            vec![vec![q("3"), q("1"), q("2"), q("2")]; 2],
            vec![vec![q("1/2"), q("0"), q("1"), q("0")]; 2],
        )
        .unwrap();
        for space in [Space::V, Space::W] {
            let c = Checker::new(&inst, space).unwrap();
            for a in crate::enumerate::enumerate_allocations(2, 4).unwrap() {
                assert_eq!(
                    c.check(&Notion::Mms, &a).unwrap().holds,
                    c.check(&Notion::AlphaMms(q("1")), &a).unwrap().holds
                );
            }
        }
    }

    #[test]
    fn missing_alpha_range() {
        let inst = Instance2D::from_rows(vec![vec![q("-1"); 2]; 2], vec![vec![q("0"); 2]; 2]).unwrap();
        let c = Checker::new(&inst, Space::V).unwrap();
        let a = Allocation::new(vec![0, 1]);
        assert!(matches!(
            c.check(&Notion::AlphaMms(q("0")), &a),
            Err(Error::BadAlpha { .. })
        ));
        assert!(matches!(
            c.check(&Notion::AlphaMmsII(q("2")), &a),
            Err(Error::BadAlpha { .. })
        ));
    }
}

//! Proportionality notions when every agent's value depends on who receives each item.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Notion, Verdict, Witness};
use crate::error::{Error, Result};
use crate::model::{Allocation, FullInstance};
use crate::rational::Rational;
use crate::utility::utility_full;

/// Checks PROP-E or Average Share. For PROP-E, `u_i(A_j)` is the utility
/// of `i` after `i` and `j` exchange bundles.
pub fn check_full(inst: &FullInstance, notion: &Notion, alloc: &Allocation) -> Result<Verdict> {
    alloc.validate(inst.n(), inst.m())?;
    let n = inst.n();
    let nn = Rational::from_integer(n as i64);
    let threshold = |i: usize| -> Result<Rational> {
        match notion {
            Notion::PropE => {
                let mut total = Rational::zero();
                for j in 0..n {
                    total += utility_full(inst, i, &alloc.swapped(i, j))?;
                }
                Ok(total / &nn)
            }
            Notion::AvgShare => {
                let mut total = Rational::zero();
                for j in 0..n {
                    for k in 0..inst.m() {
                        total += inst.value(i, j, k);
                    }
                }
                Ok(total / &nn)
            }
            Notion::Prop1E | Notion::PropxE => Err(Error::UnsupportedLevel(format!(
                "{} with full externalities",
                notion.name()
            ))),
            _ => Err(Error::WrongSpace {
                notion: notion.name().into(),
                space: "FULL".into(),
            }),
        }
    };
    for i in 0..n {
        let t = threshold(i)?;
        let u = utility_full(inst, i, alloc)?;
        if u < t {
            return Ok(Verdict::fail(Witness::Share {
                agent: i,
                item: None,
                utility: u,
                threshold: t,
            }));
        }
    }
    Ok(Verdict::pass())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GapDirection {
    /// PROP-E holds and Average Share fails.
    PropENotAvg,
    /// Average Share holds and PROP-E fails.
    AvgNotPropE,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapInstance {
    pub instance: FullInstance,
    pub allocation: Allocation,
    pub direction: GapDirection,
    /// Trial number at which it was found.
    pub trial: u64,
}

/// Random search over three agents with integer values in `[-5, 5]`.
pub fn search_fullext_gap(
    m: usize,
    seed: u64,
    trials: u64,
    want: Option<GapDirection>,
) -> Result<Option<GapInstance>> {
    const N: usize = 3;
    if m > 6 {
        return Err(Error::InvalidInstance(format!("gap search needs m <= 6, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let tensor: Vec<Vec<Vec<Rational>>> = (0..N)
            .map(|_| {
                (0..N)
                    .map(|_| (0..m).map(|_| Rational::from(rng.random_range(-5i64..=5))).collect())
                    .collect()
            })
            .collect();
        let alloc = Allocation::new((0..m).map(|_| rng.random_range(0..N)).collect());
        let inst = FullInstance::from_tensor(tensor)?;
        let prop = check_full(&inst, &Notion::PropE, &alloc)?.holds;
        let avg = check_full(&inst, &Notion::AvgShare, &alloc)?.holds;
        let direction = match (prop, avg) {
            (true, false) => GapDirection::PropENotAvg,
            (false, true) => GapDirection::AvgNotPropE,
            _ => continue,
        };
        if want.is_none_or(|w| w == direction) {
            return Ok(Some(GapInstance {
                instance: inst,
                allocation: alloc,
                direction,
                trial,
            }));
        }
    }
    Ok(None)
}

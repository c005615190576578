//! The 2-D to 1-D transformation `w = v - v'` and its sanity reports.

use serde::{Deserialize, Serialize};

use crate::model::{Allocation, Instance1D, Instance2D, Kind};
use crate::rational::Rational;
use crate::utility::{utility_1d, utility_2d};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformResult {
    pub one_d: Instance1D,
    /// `v'_i(M)` per agent, the constant gap between `u_i` and `w_i`.
    pub shift: Vec<Rational>,
}

pub fn transform(inst: &Instance2D) -> TransformResult {
    let w = (0..inst.n())
        .map(|i| (0..inst.m()).map(|k| inst.w(i, k)).collect())
        .collect();
    let one_d = Instance1D::new(inst.item_ids().to_vec(), w).expect("same shape as the input");
    let shift = (0..inst.n()).map(|i| inst.vprime_total(i)).collect();
    TransformResult { one_d, shift }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub normalized: bool,
    pub monotone: bool,
    /// Bundle values are `>= 0` for goods and `<= 0` for chores.
    pub sign_ok: bool,
    /// First `(agent, item)` breaking monotonicity.
    pub witness: Option<(usize, usize)>,
}

pub fn verify_lemma1(result: &TransformResult, kind: Kind) -> Lemma1Report {
    let inst = &result.one_d;
    let bad = |w: &Rational| match kind {
        Kind::Goods | Kind::Mixed => w.is_negative(),
        Kind::Chores => w.is_positive(),
    };
    let witness = (0..inst.n())
        .flat_map(|i| (0..inst.m()).map(move |k| (i, k)))
        .find(|&(i, k)| bad(inst.w(i, k)));
    // Additive bundle values keep the sign of their items, so the singleton
    // bundles decide both properties.
    let sign_ok = (0..inst.n()).all(|i| {
        (0..inst.m()).all(|k| {
            let single: Rational = (0..inst.m()).filter(|&x| x == k).map(|x| inst.w(i, x).clone()).sum();
            !bad(&single)
        })
    });
    let mixed = kind == Kind::Mixed;
    Lemma1Report {
        // Additive values give w(empty) = 0 by construction.
        normalized: true,
        monotone: witness.is_none() && !mixed,
        sign_ok: sign_ok && !mixed,
        witness,
    }
}

/// True when `u_i = w_i + shift_i` on every sampled allocation.
pub fn check_shift_consistency(
    inst: &Instance2D,
    result: &TransformResult,
    samples: &[Allocation],
) -> bool {
    if result.shift.len() != inst.n() {
        return false;
    }
    samples.iter().all(|a| {
        (0..inst.n()).all(|i| match (utility_2d(inst, i, a), utility_1d(&result.one_d, i, a)) {
            (Ok(u), Ok(w)) => u == w + &result.shift[i],
            _ => false,
        })
    })
}

//! Exact utility evaluation, one item at a time.
//!
//! These are the slow reference definitions. Exhaustive scans use the scaled
//! integer tables in [`crate::kernel`] instead.

use crate::error::{Error, Result};
use crate::model::{Allocation, FullInstance, Instance1D, Instance2D};
use crate::rational::Rational;

fn check(n: usize, m: usize, agent: usize, alloc: &Allocation) -> Result<()> {
    if agent >= n {
        return Err(Error::InvalidAllocation(format!(
            "agent {agent} out of range for {n} agents"
        )));
    }
    alloc.validate(n, m)
}

/// `u_i(A_i) = v_i(A_i) + v'_i(M \ A_i)`.
pub fn utility_2d(inst: &Instance2D, agent: usize, alloc: &Allocation) -> Result<Rational> {
    check(inst.n(), inst.m(), agent, alloc)?;
    Ok(holding_2d(inst, agent, |k| alloc.owner(k) == agent))
}

/// Utility of `agent` when it holds exactly the items selected by `held`.
pub fn holding_2d(inst: &Instance2D, agent: usize, held: impl Fn(usize) -> bool) -> Rational {
    let mut total = Rational::zero();
    for k in 0..inst.m() {
        if held(k) {
            total += inst.v(agent, k);
        } else {
            total += inst.vprime(agent, k);
        }
    }
    total
}

pub fn utility_1d(inst: &Instance1D, agent: usize, alloc: &Allocation) -> Result<Rational> {
    check(inst.n(), inst.m(), agent, alloc)?;
    Ok((0..inst.m())
        .filter(|&k| alloc.owner(k) == agent)
        .map(|k| inst.w(agent, k))
        .sum())
}

/// `sum_j sum_{k in A_j} v_{ijk}`.
pub fn utility_full(inst: &FullInstance, agent: usize, alloc: &Allocation) -> Result<Rational> {
    check(inst.n(), inst.m(), agent, alloc)?;
    Ok((0..inst.m())
        .map(|k| inst.value(agent, alloc.owner(k), k))
        .sum())
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

    #[test]
    fn empty_bundle_is_total_externality() {
        let inst = intro();
        let alloc = Allocation::new(vec![1, 1]);
        assert_eq!(utility_2d(&inst, 0, &alloc).unwrap(), inst.vprime_total(0));
    }

    #[test]
    fn intro_utility() {
        let alloc = Allocation::new(vec![0, 1]);
        assert_eq!(utility_2d(&intro(), 0, &alloc).unwrap(), q("-94"));
    }

    #[test]
    fn example2_agent1_utility() {
        let v = ["-9", "-11", "-12", "-13", "-9", "-1"];
        let vp = ["1", "1", "1", "1", "1", "38"];
        let row = |xs: &[&str]| xs.iter().map(|s| q(s)).collect::<Vec<_>>();
        let inst =
            Instance2D::from_rows(vec![row(&v), row(&v)], vec![row(&vp), row(&vp)]).unwrap();
        let alloc = Allocation::new(vec![0, 0, 0, 0, 0, 1]);
        assert_eq!(utility_2d(&inst, 0, &alloc).unwrap(), q("-16"));
    }

    #[test]
    fn one_d_after_transform() {
        let inst = Instance1D::from_rows(vec![vec![q("7"), q("105")]]).unwrap();
        assert_eq!(utility_1d(&inst, 0, &Allocation::new(vec![0, 0])).unwrap(), q("112"));
        let two = Instance1D::from_rows(vec![vec![q("7")], vec![q("1")]]).unwrap();
        assert_eq!(utility_1d(&two, 0, &Allocation::new(vec![1])).unwrap(), q("0"));
    }

    #[test]
    fn full_single_agent_sums_everything() {
        let inst = FullInstance::from_tensor(vec![vec![vec![q("1"), q("-2"), q("1/2")]]]).unwrap();
        let got = utility_full(&inst, 0, &Allocation::new(vec![0, 0, 0])).unwrap();
        assert_eq!(got, q("-1/2"));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let inst = intro();
        assert!(matches!(
            utility_2d(&inst, 0, &Allocation::new(vec![0])),
            Err(Error::InvalidAllocation(_))
        ));
        assert!(utility_2d(&inst, 2, &Allocation::new(vec![0, 1])).is_err());
        assert!(utility_2d(&inst, 0, &Allocation::new(vec![0, 2])).is_err());
    }
}

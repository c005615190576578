//! Instances, allocations and sign classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

fn check_matrix(name: &str, rows: &[Vec<Rational>], n: usize, m: usize) -> Result<()> {
    if rows.len() != n {
        return Err(Error::InvalidInstance(format!(
            "{name} has {} rows, expected {n}",
            rows.len()
        )));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(Error::InvalidInstance(format!(
            "{name} row {i} has {} entries, expected {m}",
            row.len()
        )));
    }
    Ok(())
}

fn default_ids(prefix: &str, m: usize) -> Vec<String> {
    (1..=m).map(|k| format!("{prefix}{k}")).collect()
}

/// Additive 2-D valuations: `v[i][k]` when agent `i` receives item `k`,
/// `vprime[i][k]` when someone else does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance2D {
    item_ids: Vec<String>,
    v: Vec<Vec<Rational>>,
    vprime: Vec<Vec<Rational>>,
}

impl Instance2D {
    pub fn new(
        item_ids: Vec<String>,
        v: Vec<Vec<Rational>>,
        vprime: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let n = v.len();
        if n == 0 {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        let m = item_ids.len();
        check_matrix("v", &v, n, m)?;
        check_matrix("vprime", &vprime, n, m)?;
        Ok(Instance2D {
            item_ids,
            v,
            vprime,
        })
    }

    /// Same as [`Instance2D::new`] with ids `k1..km`.
    pub fn from_rows(v: Vec<Vec<Rational>>, vprime: Vec<Vec<Rational>>) -> Result<Self> {
        let m = v.first().map_or(0, Vec::len);
        Self::new(default_ids("k", m), v, vprime)
    }

    /// Builds an instance from `(v, v')` pairs per agent and item.
    pub fn from_pairs(item_ids: Vec<String>, pairs: Vec<Vec<(Rational, Rational)>>) -> Result<Self> {
        let (v, vprime) = pairs
            .into_iter()
            .map(|row| row.into_iter().unzip())
            .unzip();
        Self::new(item_ids, v, vprime)
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn m(&self) -> usize {
        self.item_ids.len()
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn v(&self, i: usize, k: usize) -> &Rational {
        &self.v[i][k]
    }

    pub fn vprime(&self, i: usize, k: usize) -> &Rational {
        &self.vprime[i][k]
    }

    pub fn v_rows(&self) -> &[Vec<Rational>] {
        &self.v
    }

    pub fn vprime_rows(&self) -> &[Vec<Rational>] {
        &self.vprime
    }

    /// Marginal value `v_ik - v'_ik` of receiving the item.
    pub fn w(&self, i: usize, k: usize) -> Rational {
        &self.v[i][k] - &self.vprime[i][k]
    }

    /// `v'_i(M)`.
    pub fn vprime_total(&self, i: usize) -> Rational {
        self.vprime[i].iter().sum()
    }

    /// Embeds a 1-D instance with no externality.
    pub fn from_one_d(inst: &Instance1D) -> Self {
        let zeros = vec![vec![Rational::zero(); inst.m()]; inst.n()];
        Instance2D {
            item_ids: inst.item_ids.clone(),
            v: inst.w.clone(),
            vprime: zeros,
        }
    }
}

/// Additive 1-D valuations `w[i][k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance1D {
    item_ids: Vec<String>,
    w: Vec<Vec<Rational>>,
}

impl Instance1D {
    pub fn new(item_ids: Vec<String>, w: Vec<Vec<Rational>>) -> Result<Self> {
        let n = w.len();
        if n == 0 {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        check_matrix("w", &w, n, item_ids.len())?;
        Ok(Instance1D { item_ids, w })
    }

    pub fn from_rows(w: Vec<Vec<Rational>>) -> Result<Self> {
        let m = w.first().map_or(0, Vec::len);
        Self::new(default_ids("k", m), w)
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn m(&self) -> usize {
        self.item_ids.len()
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn w(&self, i: usize, k: usize) -> &Rational {
        &self.w[i][k]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.w
    }

    /// Sign pattern of the whole matrix.
    pub fn kind(&self) -> Kind {
        kind_of(self.w.iter().flatten().map(Rational::signum))
    }
}

/// Full externalities: `v_full[i][j][k]` is what agent `i` gets when item `k`
/// goes to agent `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullInstance {
    item_ids: Vec<String>,
    v_full: Vec<Vec<Vec<Rational>>>,
}

impl FullInstance {
    pub fn new(item_ids: Vec<String>, v_full: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = v_full.len();
        if n == 0 {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        for (i, plane) in v_full.iter().enumerate() {
            check_matrix(&format!("v_full[{i}]"), plane, n, item_ids.len())?;
        }
        Ok(FullInstance { item_ids, v_full })
    }

    pub fn from_tensor(v_full: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let m = v_full
            .first()
            .and_then(|p| p.first())
            .map_or(0, Vec::len);
        Self::new(default_ids("k", m), v_full)
    }

    /// The 2-D instance seen as a full tensor: `v` on the diagonal, `v'` elsewhere.
    pub fn embed(inst: &Instance2D) -> Self {
        let n = inst.n();
        let v_full = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..inst.m())
                            .map(|k| {
                                if i == j {
                                    inst.v(i, k).clone()
                                } else {
                                    inst.vprime(i, k).clone()
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FullInstance {
            item_ids: inst.item_ids.clone(),
            v_full,
        }
    }

    pub fn n(&self) -> usize {
        self.v_full.len()
    }

    pub fn m(&self) -> usize {
        self.item_ids.len()
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.v_full[i][j][k]
    }

    pub fn tensor(&self) -> &[Vec<Vec<Rational>>] {
        &self.v_full
    }
}

/// Item `k` goes to agent `assignment[k]`. Empty bundles are fine.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Allocation {
    assignment: Vec<usize>,
}

impl Allocation {
    pub fn new(assignment: Vec<usize>) -> Self {
        Allocation { assignment }
    }

    /// Builds the allocation from explicit bundles; every item must appear exactly once.
    pub fn from_bundles(m: usize, bundles: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; m];
        for (i, bundle) in bundles.iter().enumerate() {
            for &k in bundle {
                if k >= m {
                    return Err(Error::InvalidAllocation(format!("item {k} out of range")));
                }
                if assignment[k] != usize::MAX {
                    return Err(Error::InvalidAllocation(format!("item {k} assigned twice")));
                }
                assignment[k] = i;
            }
        }
        if let Some(k) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidAllocation(format!("item {k} unassigned")));
        }
        Ok(Allocation { assignment })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<usize> {
        self.assignment
    }

    pub fn m(&self) -> usize {
        self.assignment.len()
    }

    pub fn owner(&self, k: usize) -> usize {
        self.assignment[k]
    }

    pub fn bundle(&self, i: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&k| self.assignment[k] == i)
            .collect()
    }

    pub fn bundles(&self, n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| self.bundle(i)).collect()
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if self.assignment.len() != m {
            return Err(Error::InvalidAllocation(format!(
                "assignment has {} entries for {m} items",
                self.assignment.len()
            )));
        }
        if let Some(k) = self.assignment.iter().position(|&a| a >= n) {
            return Err(Error::InvalidAllocation(format!(
                "item {k} assigned to agent {} but there are {n} agents",
                self.assignment[k]
            )));
        }
        Ok(())
    }

    /// Exchanges the bundles of agents `i` and `j`.
    pub fn swapped(&self, i: usize, j: usize) -> Allocation {
        let assignment = self
            .assignment
            .iter()
            .map(|&a| match a {
                a if a == i => j,
                a if a == j => i,
                a => a,
            })
            .collect();
        Allocation { assignment }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ItemClass {
    Good,
    Chore,
    Neutral,
}

impl ItemClass {
    pub fn of(w: &Rational) -> ItemClass {
        match w.signum() {
            1 => ItemClass::Good,
            -1 => ItemClass::Chore,
            _ => ItemClass::Neutral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Kind {
    Goods,
    Chores,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Externality {
    Positive,
    Negative,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Correlation {
    Correlated,
    Inverse,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    pub externality: Externality,
    pub correlation: Correlation,
    pub per_item: Vec<Vec<ItemClass>>,
}

/// Weak sign pattern: all zeros count as goods.
fn kind_of(signs: impl Iterator<Item = i8>) -> Kind {
    let (mut pos, mut neg) = (false, false);
    for s in signs {
        pos |= s > 0;
        neg |= s < 0;
    }
    match (pos, neg) {
        (_, false) => Kind::Goods,
        (false, true) => Kind::Chores,
        (true, true) => Kind::Mixed,
    }
}

pub fn classify(inst: &Instance2D) -> Classification {
    let n = inst.n();
    let m = inst.m();
    let per_item: Vec<Vec<ItemClass>> = (0..n)
        .map(|i| (0..m).map(|k| ItemClass::of(&inst.w(i, k))).collect())
        .collect();
    let kind = kind_of(
        (0..n).flat_map(|i| (0..m).map(move |k| (i, k))).map(|(i, k)| inst.w(i, k).signum()),
    );
    let externality = match kind_of(inst.vprime.iter().flatten().map(Rational::signum)) {
        Kind::Goods => Externality::Positive,
        Kind::Chores => Externality::Negative,
        Kind::Mixed => Externality::Mixed,
    };
    let correlation = match (kind, externality) {
        (Kind::Goods, Externality::Positive) | (Kind::Chores, Externality::Negative) => {
            Correlation::Correlated
        }
        (Kind::Goods, Externality::Negative) | (Kind::Chores, Externality::Positive) => {
            Correlation::Inverse
        }
        _ => Correlation::Neither,
    };
    Classification {
        kind,
        externality,
        correlation,
        per_item,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pairs(rows: &[&[(&str, &str)]]) -> Instance2D {
        let m = rows[0].len();
        let pairs = rows
            .iter()
            .map(|r| r.iter().map(|(a, b)| (q(a), q(b))).collect())
            .collect();
        Instance2D::from_pairs(default_ids("k", m), pairs).unwrap()
    }

    #[test]
    fn rejects_ragged_matrices() {
        let err = Instance2D::new(
            default_ids("k", 2),
            vec![vec![q("1"), q("2")]],
            vec![vec![q("1")]],
        );
        assert!(matches!(err, Err(Error::InvalidInstance(_))));
        assert!(Instance1D::new(vec![], vec![]).is_err());
    }

    #[test]
    fn classification_of_chores_with_negative_externality() {
        let inst = pairs(&[&[("-40", "-36"), ("-110", "-70"), ("-109", "-71")]]);
        let c = classify(&inst);
        assert_eq!(c.kind, Kind::Chores);
        assert_eq!(c.externality, Externality::Negative);
        assert_eq!(c.correlation, Correlation::Correlated);
    }

    #[test]
    fn all_zero_instance_is_weakly_goods_and_neutral() {
        let inst = pairs(&[&[("0", "0"), ("0", "0")], &[("0", "0"), ("0", "0")]]);
        let c = classify(&inst);
        assert_eq!(c.kind, Kind::Goods);
        assert!(c.per_item.iter().flatten().all(|&x| x == ItemClass::Neutral));
    }

    #[test]
    fn mixed_signs_are_mixed() {
        let inst = pairs(&[&[("1", "0"), ("-1", "0")]]);
        assert_eq!(classify(&inst).kind, Kind::Mixed);
        let inst = pairs(&[&[("2", "1"), ("3", "-1")]]);
        let c = classify(&inst);
        assert_eq!((c.kind, c.externality), (Kind::Goods, Externality::Mixed));
        assert_eq!(c.correlation, Correlation::Neither);
    }

    #[test]
    fn bundles_round_trip() {
        let a = Allocation::new(vec![2, 0, 2, 1]);
        let b = Allocation::from_bundles(4, &a.bundles(3)).unwrap();
        assert_eq!(a, b);
        assert!(Allocation::from_bundles(2, &[vec![0], vec![0, 1]]).is_err());
        assert!(Allocation::from_bundles(2, &[vec![0]]).is_err());
        assert!(a.validate(2, 4).is_err());
        assert!(a.validate(3, 3).is_err());
        assert_eq!(a.swapped(0, 2).assignment(), &[0, 2, 0, 1]);
    }
}

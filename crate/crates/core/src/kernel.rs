//! Scaled integer utility tables.
//!
//! Every rational entry of an instance is multiplied by one common
//! denominator `D`, so that utilities become integers and all agents compare
//! on the same scale. For agent `i` and item `k` the table stores
//! `gain[i][k] = w_ik * D` and per agent `base[i] = v'_i(M) * D` (zero in the
//! 1-D space), so that `u_i(S) * D = base[i] + sum_{k in S} gain[i][k]`.
//!
//! Tables use `i128` when the magnitudes leave enough headroom and fall back
//! to `BigInt` otherwise.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance1D, Instance2D, Kind};
use crate::rational::Rational;
use crate::transform::transform;

/// Integer type usable in scaled tables.
pub trait Int: Clone + Ord + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_big(v: &BigInt) -> Self;
    /// Like `from_big`, saturating where the type is bounded.
    fn from_big_clamped(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn add_assign(&mut self, o: &Self);
    fn mul_usize(&self, k: usize) -> Self;
    fn neg(&self) -> Self;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
}

impl Int for i128 {
    #[inline]
    fn zero() -> Self {
        0
    }
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("value checked against headroom")
    }
    fn from_big_clamped(v: &BigInt) -> Self {
        let limit = 1i128 << CLAMP_BITS;
        v.to_i128().map_or(
            if Signed::is_negative(v) { -limit } else { limit },
            |x| x.clamp(-limit, limit),
        )
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    #[inline]
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    #[inline]
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    #[inline]
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    #[inline]
    fn mul_usize(&self, k: usize) -> Self {
        self * k as i128
    }
    #[inline]
    fn neg(&self) -> Self {
        -self
    }
    #[inline]
    fn is_negative(&self) -> bool {
        *self < 0
    }
    #[inline]
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn from_big_clamped(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn mul_usize(&self, k: usize) -> Self {
        self * BigInt::from(k)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// Per-agent magnitude bound below which `i128` is used.
const HEADROOM_BITS: u64 = 90;
/// Scaled thresholds are clamped to this magnitude in `i128` tables.
const CLAMP_BITS: u32 = 126;

#[derive(Debug, Clone)]
pub struct Tables<T> {
    n: usize,
    m: usize,
    gain: Vec<T>,
    base: Vec<T>,
}

impl<T: Int> Tables<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn gain(&self, i: usize, k: usize) -> &T {
        &self.gain[i * self.m + k]
    }

    #[inline]
    pub fn base(&self, i: usize) -> &T {
        &self.base[i]
    }

    /// Own utilities `u_i(A_i) * D` for every agent.
    pub fn own_into(&self, a: &[usize], out: &mut Vec<T>) {
        out.clear();
        out.extend(self.base.iter().cloned());
        for (k, &i) in a.iter().enumerate() {
            out[i].add_assign(self.gain(i, k));
        }
    }

    pub fn own(&self, a: &[usize]) -> Vec<T> {
        let mut out = Vec::with_capacity(self.n);
        self.own_into(a, &mut out);
        out
    }

    /// Row-major `n x n` matrix of `u_i(A_j) * D`: agent `i` holding bundle `j`.
    pub fn holding_into(&self, a: &[usize], out: &mut Vec<T>) {
        let n = self.n;
        out.clear();
        for i in 0..n {
            for _ in 0..n {
                out.push(self.base[i].clone());
            }
        }
        for (k, &j) in a.iter().enumerate() {
            for i in 0..n {
                out[i * n + j].add_assign(self.gain(i, k));
            }
        }
    }

    /// `u_i(A_j) * D` for every bundle `j` of agent `i`.
    pub fn bundle_values_into(&self, i: usize, a: &[usize], out: &mut Vec<T>) {
        out.clear();
        out.resize(self.n, self.base[i].clone());
        for (k, &j) in a.iter().enumerate() {
            out[j].add_assign(self.gain(i, k));
        }
    }

    /// `sum_j u_i(A_j) * D`, which does not depend on the allocation.
    pub fn bundle_total(&self, i: usize) -> T {
        let mut t = self.base[i].mul_usize(self.n);
        for k in 0..self.m {
            t.add_assign(self.gain(i, k));
        }
        t
    }

    /// Converts a scaled threshold, clamping in narrow tables.
    pub fn threshold(&self, scaled: &BigInt) -> T {
        T::from_big_clamped(scaled)
    }
}

#[derive(Debug, Clone)]
pub enum Scaled {
    Small(Tables<i128>),
    Big(Tables<BigInt>),
}

/// Runs `$body` with `$t` bound to the concrete tables.
#[macro_export]
macro_rules! with_tables {
    ($scaled:expr, |$t:ident| $body:expr) => {
        match $scaled {
            $crate::kernel::Scaled::Small($t) => $body,
            $crate::kernel::Scaled::Big($t) => $body,
        }
    };
}

/// Which valuation space utilities are evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    V,
    W,
    Full,
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Space::V => "V",
            Space::W => "W",
            Space::Full => "FULL",
        })
    }
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "V" => Ok(Space::V),
            "W" => Ok(Space::W),
            "FULL" => Ok(Space::Full),
            _ => Err(Error::InvalidInstance(format!("unknown space {s:?}"))),
        }
    }
}

/// An instance prepared for evaluation in the 2-D space `V` or the 1-D space `W`.
#[derive(Debug, Clone)]
pub struct Valuation {
    space: Space,
    n: usize,
    m: usize,
    den: BigInt,
    gain: Vec<Vec<Rational>>,
    base: Vec<Rational>,
    /// Average share thresholds, only in `V`.
    avg_share: Option<Vec<Rational>>,
    scaled: Scaled,
}

fn lcm_of<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

fn scale(r: &Rational, den: &BigInt) -> BigInt {
    let x = r * Rational::from_integer(den.clone());
    debug_assert!(x.is_integer());
    x.numer().clone()
}

fn build_tables<T: Int>(n: usize, m: usize, gain: &[Vec<BigInt>], base: &[BigInt]) -> Tables<T> {
    Tables {
        n,
        m,
        gain: gain.iter().flatten().map(T::from_big).collect(),
        base: base.iter().map(T::from_big).collect(),
    }
}

impl Valuation {
    /// Scales `recv` (value when receiving) and `rest` (value otherwise).
    fn build(
        space: Space,
        recv: &[Vec<Rational>],
        rest: Option<&[Vec<Rational>]>,
        m: usize,
    ) -> Valuation {
        let n = recv.len();
        let mut den = lcm_of(recv.iter().flatten());
        if let Some(rest) = rest {
            den = den.lcm(&lcm_of(rest.iter().flatten()));
        }
        let zero = <BigInt as Zero>::zero();
        let a: Vec<Vec<BigInt>> = recv
            .iter()
            .map(|row| row.iter().map(|r| scale(r, &den)).collect())
            .collect();
        let b: Vec<Vec<BigInt>> = match rest {
            Some(rest) => rest
                .iter()
                .map(|row| row.iter().map(|r| scale(r, &den)).collect())
                .collect(),
            None => vec![vec![zero.clone(); m]; n],
        };
        let gain_s: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..m).map(|k| &a[i][k] - &b[i][k]).collect())
            .collect();
        let base_s: Vec<BigInt> = b.iter().map(|row| row.iter().sum()).collect();
        let fits = n <= 1024
            && (0..n).all(|i| {
                let bound: BigInt = (0..m)
                    .map(|k| a[i][k].abs().max(b[i][k].abs()))
                    .sum::<BigInt>()
                    + base_s[i].abs();
                bound.bits() <= HEADROOM_BITS
            });
        let scaled = if fits {
            Scaled::Small(build_tables(n, m, &gain_s, &base_s))
        } else {
            Scaled::Big(build_tables(n, m, &gain_s, &base_s))
        };
        let gain = (0..n)
            .map(|i| {
                (0..m)
                    .map(|k| match rest {
                        Some(rest) => &recv[i][k] - &rest[i][k],
                        None => recv[i][k].clone(),
                    })
                    .collect()
            })
            .collect();
        let base = (0..n)
            .map(|i| match rest {
                Some(rest) => rest[i].iter().sum(),
                None => Rational::zero(),
            })
            .collect();
        let avg_share = rest.map(|rest| {
            let nn = Rational::from_integer(n as i64);
            let others = Rational::from_integer(n as i64 - 1);
            (0..n)
                .map(|i| {
                    (0..m)
                        .map(|k| (&recv[i][k] + &others * &rest[i][k]) / &nn)
                        .sum()
                })
                .collect()
        });
        Valuation {
            space,
            n,
            m,
            den,
            gain,
            base,
            avg_share,
            scaled,
        }
    }

    /// The 2-D space.
    pub fn v(inst: &Instance2D) -> Valuation {
        Self::build(Space::V, inst.v_rows(), Some(inst.vprime_rows()), inst.m())
    }

    /// The 1-D space of a 1-D instance.
    pub fn w(inst: &Instance1D) -> Valuation {
        Self::build(Space::W, inst.rows(), None, inst.m())
    }

    /// `V` for [`Space::V`], the transformed instance for [`Space::W`].
    pub fn of(inst: &Instance2D, space: Space) -> Result<Valuation> {
        match space {
            Space::V => Ok(Self::v(inst)),
            Space::W => Ok(Self::w(&transform(inst).one_d)),
            Space::Full => Err(Error::WrongSpace {
                notion: "scaled evaluation".into(),
                space: "FULL".into(),
            }),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn scaled(&self) -> &Scaled {
        &self.scaled
    }

    pub fn is_big(&self) -> bool {
        matches!(self.scaled, Scaled::Big(_))
    }

    /// Marginal value of item `k` for agent `i` (identical in `V` and `W`).
    pub fn gain(&self, i: usize, k: usize) -> &Rational {
        &self.gain[i][k]
    }

    /// Utility of the empty bundle.
    pub fn base(&self, i: usize) -> &Rational {
        &self.base[i]
    }

    pub fn avg_share(&self) -> Option<&[Rational]> {
        self.avg_share.as_deref()
    }

    /// Sign pattern of the marginal values.
    pub fn kind(&self) -> Kind {
        let (mut pos, mut neg) = (false, false);
        for r in self.gain.iter().flatten() {
            pos |= r.is_positive();
            neg |= r.is_negative();
        }
        match (pos, neg) {
            (_, false) => Kind::Goods,
            (false, true) => Kind::Chores,
            _ => Kind::Mixed,
        }
    }

    /// Exact `u_i` of holding the items selected by `held`.
    pub fn holding(&self, i: usize, held: impl Fn(usize) -> bool) -> Rational {
        let mut u = self.base[i].clone();
        for k in (0..self.m).filter(|&k| held(k)) {
            u += &self.gain[i][k];
        }
        u
    }

    pub fn utility(&self, i: usize, alloc: &Allocation) -> Rational {
        self.holding(i, |k| alloc.owner(k) == i)
    }

    pub fn utilities(&self, alloc: &Allocation) -> Vec<Rational> {
        (0..self.n).map(|i| self.utility(i, alloc)).collect()
    }

    /// Turns a scaled integer back into a rational.
    pub fn unscale<T: Int>(&self, x: &T) -> Rational {
        Rational::new(x.to_big(), self.den.clone())
    }

    /// Smallest scaled integer `t` with `t >= theta * D`.
    pub fn ceil_scaled(&self, theta: &Rational) -> BigInt {
        (theta * Rational::from_integer(self.den.clone())).ceil()
    }

    pub fn check_alloc(&self, alloc: &Allocation) -> Result<()> {
        alloc.validate(self.n, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::utility::{utility_1d, utility_2d};

    fn sample() -> Instance2D {
        Instance2D::from_rows(
            vec![vec![q("1/3"), q("-2"), q("0.5")], vec![q("7"), q("1/6"), q("0")]],
            vec![vec![q("-1/4"), q("-1"), q("1/10")], vec![q("2"), q("0"), q("-3/7")]],
        )
        .unwrap()
    }

    #[test]
    fn scaled_utilities_match_reference() {
        let inst = sample();
        let val = Valuation::v(&inst);
        let w = Valuation::of(&inst, Space::W).unwrap();
        for a in crate::enumerate::enumerate_allocations(2, 3).unwrap() {
            with_tables!(val.scaled(), |t| {
                let own = t.own(a.assignment());
                for (i, x) in own.iter().enumerate() {
                    assert_eq!(val.unscale(x), utility_2d(&inst, i, &a).unwrap());
                    assert_eq!(val.utility(i, &a), utility_2d(&inst, i, &a).unwrap());
                }
            });
            let one = transform(&inst).one_d;
            with_tables!(w.scaled(), |t| {
                let own = t.own(a.assignment());
                for (i, x) in own.iter().enumerate() {
                    assert_eq!(w.unscale(x), utility_1d(&one, i, &a).unwrap());
                }
            });
        }
    }

    #[test]
    fn holding_matrix_diagonal_is_own() {
        let val = Valuation::v(&sample());
        with_tables!(val.scaled(), |t| {
            let a = [1, 0, 1];
            let mut h = Vec::new();
            t.holding_into(&a, &mut h);
            let own = t.own(&a);
            assert_eq!(h[0], own[0]);
            assert_eq!(h[3], own[1]);
            let mut b = Vec::new();
            t.bundle_values_into(0, &a, &mut b);
            assert_eq!(&b[..], &h[0..2]);
        });
    }

    #[test]
    fn huge_denominators_fall_back_to_bigint() {
        let big = Rational::new(1, BigInt::from(10).pow(40));
        let inst = Instance2D::from_rows(
            vec![vec![big.clone(), q("3")]],
            vec![vec![q("1"), big.clone()]],
        )
        .unwrap();
        let val = Valuation::v(&inst);
        assert!(val.is_big());
        let a = Allocation::new(vec![0, 0]);
        with_tables!(val.scaled(), |t| {
            let own = t.own(a.assignment());
            assert_eq!(val.unscale(&own[0]), &big + q("3"));
        });
        assert!(!Valuation::v(&sample()).is_big());
    }

    #[test]
    fn average_share_threshold() {
        let val = Valuation::v(&sample());
        let avg = val.avg_share().unwrap();
        // (v + v') / 2 per item for agent 0.
        assert_eq!(avg[0], (q("1/3") - q("1/4") + q("-2") - q("1") + q("0.5") + q("1/10")) / q("2"));
        assert!(Valuation::of(&sample(), Space::W).unwrap().avg_share().is_none());
    }
}

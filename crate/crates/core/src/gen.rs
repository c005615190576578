//! Seeded random instances with a prescribed sign pattern.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate::count;
use crate::error::{Error, Result};
use crate::model::{Externality, Instance2D, Kind};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub agents: usize,
    pub items: usize,
    /// Sign of every `w_ik`; `Mixed` draws each sign independently.
    pub kind: Kind,
    /// Sign of every `v'_ik`; `Mixed` also allows zero.
    pub externality: Externality,
    /// Largest denominator of any entry.
    pub max_den: u64,
    /// Bound on `|w_ik|` and `|v'_ik|`.
    pub max_abs: u64,
}

impl GenSpec {
    pub fn new(agents: usize, items: usize, kind: Kind, externality: Externality) -> GenSpec {
        GenSpec {
            agents,
            items,
            kind,
            externality,
            max_den: 4,
            max_abs: 10,
        }
    }

    pub fn max_den(mut self, d: u64) -> GenSpec {
        self.max_den = d;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.agents == 0 {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        if self.max_den == 0 || self.max_abs == 0 {
            return Err(Error::InvalidInstance("max-den and max-abs must be positive".into()));
        }
        count(self.agents, self.items).map(|_| ())
    }
}

/// Nonzero `p/d` with `p/d <= max_abs`, signed as `sign` asks.
fn signed(rng: &mut impl Rng, spec: &GenSpec, d: u64, sign: Kind, allow_zero: bool) -> Rational {
    if allow_zero && rng.random_bool(0.2) {
        return Rational::zero();
    }
    let x = Rational::new(rng.random_range(1..=spec.max_abs * d), d);
    let negative = match sign {
        Kind::Goods => false,
        Kind::Chores => true,
        Kind::Mixed => rng.random_bool(0.5),
    };
    if negative {
        -x
    } else {
        x
    }
}

pub fn generate_with(spec: &GenSpec, rng: &mut impl Rng) -> Result<Instance2D> {
    spec.validate()?;
    let ext_sign = match spec.externality {
        Externality::Positive => Kind::Goods,
        Externality::Negative => Kind::Chores,
        Externality::Mixed => Kind::Mixed,
    };
    let mut v = Vec::with_capacity(spec.agents);
    let mut vprime = Vec::with_capacity(spec.agents);
    for _ in 0..spec.agents {
        let mut row = Vec::with_capacity(spec.items);
        let mut prow = Vec::with_capacity(spec.items);
        for _ in 0..spec.items {
            // one denominator for both, so v = w + v' stays within max_den
            let d = rng.random_range(1..=spec.max_den);
            let w = signed(rng, spec, d, spec.kind, false);
            let p = signed(rng, spec, d, ext_sign, spec.externality == Externality::Mixed);
            row.push(w + &p);
            prow.push(p);
        }
        v.push(row);
        vprime.push(prow);
    }
    let ids = (1..=spec.items).map(|k| format!("k{k}")).collect();
    Instance2D::new(ids, v, vprime)
}

/// Deterministic in `seed`.
pub fn generate(spec: &GenSpec, seed: u64) -> Result<Instance2D> {
    generate_with(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A test corpus: `count` instances with `n <= max_n`, `m <= max_m`, and
/// kinds and externalities drawn at random.
pub fn corpus(seed: u64, count: usize, max_n: usize, max_m: usize) -> Vec<Instance2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_n);
            let m = rng.random_range(0..=max_m);
            let kind = [Kind::Goods, Kind::Chores, Kind::Mixed][rng.random_range(0..3)];
            let ext = [Externality::Positive, Externality::Negative, Externality::Mixed][rng.random_range(0..3)];
            generate_with(&GenSpec::new(n, m, kind, ext), &mut rng).expect("small corpus instance")
        })
        .collect()
}

/// Like [`corpus`] with a fixed kind.
pub fn corpus_of(kind: Kind, seed: u64, count: usize, max_n: usize, max_m: usize) -> Vec<Instance2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_n);
            let m = rng.random_range(0..=max_m);
            let ext = [Externality::Positive, Externality::Negative, Externality::Mixed][rng.random_range(0..3)];
            generate_with(&GenSpec::new(n, m, kind, ext), &mut rng).expect("small corpus instance")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify, Correlation};

    #[test]
    fn sign_patterns() {
        let cases = [
            (Kind::Goods, Externality::Negative, Correlation::Inverse),
            (Kind::Goods, Externality::Positive, Correlation::Correlated),
            (Kind::Chores, Externality::Negative, Correlation::Correlated),
            (Kind::Chores, Externality::Positive, Correlation::Inverse),
        ];
        for (kind, ext, corr) in cases {
            let inst = generate(&GenSpec::new(3, 5, kind, ext), 7).unwrap();
            let c = classify(&inst);
            assert_eq!((c.kind, c.externality, c.correlation), (kind, ext, corr));
        }
    }

    #[test]
    fn deterministic_and_bounded() {
        let spec = GenSpec::new(2, 6, Kind::Mixed, Externality::Mixed).max_den(3);
        let a = generate(&spec, 11).unwrap();
        assert_eq!(a, generate(&spec, 11).unwrap());
        for row in a.v_rows().iter().chain(a.vprime_rows()) {
            for x in row {
                assert!(*x.denom() <= 3.into());
            }
        }
    }

    #[test]
    fn empty_and_invalid() {
        let inst = generate(&GenSpec::new(2, 0, Kind::Goods, Externality::Positive), 1).unwrap();
        assert_eq!(inst.m(), 0);
        assert!(generate(&GenSpec::new(0, 2, Kind::Goods, Externality::Positive), 1).is_err());
        assert!(generate(&GenSpec::new(2, 2, Kind::Goods, Externality::Positive).max_den(0), 1).is_err());
    }
}

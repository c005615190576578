//! Approximate-share thresholds and the exact best supported `alpha`.
//!
//! Every variant's threshold has the form `T(a) = c1*a + c0 + cm/a`. For a
//! fixed allocation agent `i` accepts `a > 0` iff
//! `g_i(a) = -c1*a^2 + (u_i - c0)*a - cm >= 0`, so the supported set is a
//! finite union of intervals whose endpoints are roots of some `g_i`. The
//! largest supported `a` is therefore `1` or one of those roots.

use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::{ShareView, Surd};
use crate::enumerate::allocation_at;
use crate::error::{Error, Result};
use crate::kernel::{Int, Tables, Valuation};
use crate::model::{Allocation, Kind};
use crate::rational::Rational;
use crate::scan::{better_first, fold_reduce};
use crate::with_tables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaVariant {
    Alpha,
    Shifted,
    I,
    II,
}

impl AlphaVariant {
    pub const ALL: [AlphaVariant; 4] = [
        AlphaVariant::Alpha,
        AlphaVariant::Shifted,
        AlphaVariant::I,
        AlphaVariant::II,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlphaVariant::Alpha => "alpha-mms",
            AlphaVariant::Shifted => "shifted-alpha-mms",
            AlphaVariant::I => "alpha-mms-i",
            AlphaVariant::II => "alpha-mms-ii",
        }
    }

    /// Whether `alpha = 0` is admissible for this view.
    pub fn closed_at_zero(self, view: &ShareView) -> bool {
        match self {
            AlphaVariant::Alpha => view.mu.iter().all(|m| !m.is_negative()),
            AlphaVariant::Shifted => view.kind == Kind::Goods,
            AlphaVariant::I => true,
            AlphaVariant::II => false,
        }
    }

    pub fn check_alpha(self, view: &ShareView, alpha: &Rational) -> Result<()> {
        let low_ok = if self.closed_at_zero(view) {
            !alpha.is_negative()
        } else {
            alpha.is_positive()
        };
        if low_ok && *alpha <= Rational::one() {
            Ok(())
        } else {
            Err(Error::BadAlpha {
                alpha: alpha.clone(),
                notion: self.name().into(),
            })
        }
    }

    pub fn coefficients(self, view: &ShareView) -> Result<Vec<Coeffs>> {
        if view.kind == Kind::Mixed {
            return Err(Error::Unsupported(format!("{} on mixed instances", self.name())));
        }
        let zero = Rational::zero;
        (0..view.n())
            .map(|i| {
                let mu = &view.mu[i];
                let s = &view.shift[i];
                let parts = || -> Result<(Rational, Rational)> {
                    match (&view.mu_plus[i], &view.mu_minus[i]) {
                        (Some(p), Some(m)) => Ok((p.clone(), m.clone())),
                        _ => Err(Error::MissingProfile),
                    }
                };
                Ok(match self {
                    AlphaVariant::Alpha if mu.is_negative() => Coeffs::new(zero(), zero(), mu.clone()),
                    AlphaVariant::Alpha => Coeffs::new(mu.clone(), zero(), zero()),
                    AlphaVariant::Shifted if view.kind == Kind::Goods => {
                        Coeffs::new(mu - s, s.clone(), zero())
                    }
                    AlphaVariant::Shifted => Coeffs::new(zero(), s.clone(), mu - s),
                    AlphaVariant::I => {
                        let (p, m) = parts()?;
                        Coeffs::new(&p + &m, m, zero())
                    }
                    AlphaVariant::II => {
                        let (p, m) = parts()?;
                        Coeffs::new(p, zero(), m)
                    }
                })
            })
            .collect()
    }

    /// Per-agent thresholds at `alpha`.
    pub fn thresholds(self, view: &ShareView, alpha: &Rational) -> Result<Vec<Rational>> {
        self.check_alpha(view, alpha)?;
        Ok(self.coefficients(view)?.iter().map(|c| c.at(alpha)).collect())
    }
}

impl fmt::Display for AlphaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AlphaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        AlphaVariant::ALL
            .into_iter()
            .find(|v| v.name() == key || v.name().trim_end_matches("-mms") == key)
            .ok_or_else(|| Error::Unsupported(format!("alpha variant {s:?}")))
    }
}

/// `T(a) = c1*a + c0 + cm/a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeffs {
    pub c1: Rational,
    pub c0: Rational,
    pub cm: Rational,
}

fn sqrt_below(x: &Rational) -> Rational {
    let scale = BigInt::from(1u8) << 32u32;
    let ab: BigInt = x.numer() * x.denom();
    let root: BigInt = (ab * &scale * &scale).sqrt();
    Rational::new(root, x.denom() * scale)
}

impl Coeffs {
    pub fn new(c1: Rational, c0: Rational, cm: Rational) -> Coeffs {
        Coeffs { c1, c0, cm }
    }

    /// Panics at `alpha = 0` when `cm != 0`.
    pub fn at(&self, alpha: &Rational) -> Rational {
        let mut t = &self.c1 * alpha + &self.c0;
        if !self.cm.is_zero() {
            t += &self.cm / alpha;
        }
        t
    }

    /// A lower bound of `T` over `[from, 1]`; `None` when unbounded below.
    fn lower_bound(&self, from: &Rational) -> Option<Rational> {
        let one = Rational::one();
        if from.is_zero() && self.cm.is_negative() {
            return None;
        }
        let mut low = self.at(&one);
        if !from.is_zero() || self.cm.is_zero() {
            low = low.min(self.at(from));
        }
        let c1 = &self.c1;
        let cm = &self.cm;
        if c1.is_positive() && cm.is_positive() && &(from * from * c1) < cm && cm < c1 {
            let bound = &self.c0 + Rational::from_integer(2) * sqrt_below(&(c1 * cm));
            low = low.min(bound);
        }
        Some(low)
    }

    /// `g(a) >= 0` with `g` as in the module docs; `a = 0` needs `cm = 0`.
    fn accepts(&self, u: &Rational, alpha: &Surd) -> bool {
        if alpha.as_rational().is_some_and(Rational::is_zero) {
            return *u >= self.c0;
        }
        alpha
            .quadratic(&-&self.c1, &(u - &self.c0), &-&self.cm)
            .signum()
            .is_ge()
    }

    /// Roots of `g` for utility `u`.
    fn roots(&self, u: &Rational) -> Vec<Surd> {
        let b = u - &self.c0;
        if self.c1.is_zero() {
            return if b.is_zero() {
                Vec::new()
            } else {
                vec![Surd::rational(&self.cm / &b)]
            };
        }
        let disc = &b * &b - Rational::from_integer(4) * &self.c1 * &self.cm;
        if disc.is_negative() {
            return Vec::new();
        }
        let two_c1 = Rational::from_integer(2) * &self.c1;
        let p = &b / &two_c1;
        let q = Rational::one() / &two_c1;
        vec![
            Surd::new(p.clone(), q.clone(), disc.clone()),
            Surd::new(p, -q, disc),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaStar {
    /// No admissible `alpha` is supported by any allocation.
    None,
    /// `alpha = 1` is supported.
    All,
    Exact(Rational),
    Irrational(Surd),
}

impl fmt::Display for AlphaStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaStar::None => f.write_str("NONE"),
            AlphaStar::All => f.write_str("ALL"),
            AlphaStar::Exact(r) => write!(f, "{r}"),
            AlphaStar::Irrational(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for AlphaStar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BestAlpha {
    pub alpha_star: AlphaStar,
    /// Earliest allocation attaining `alpha_star`.
    pub witness: Option<Allocation>,
    /// Agents with a zero share; their constraint does not depend on `alpha`.
    pub zero_mu: Vec<usize>,
}

struct Local<T> {
    best: Option<(Surd, u64)>,
    lb: Vec<Option<T>>,
    own: Vec<T>,
}

fn scaled_bounds<T: Int>(val: &Valuation, t: &Tables<T>, coeffs: &[Coeffs], from: &Rational) -> Vec<Option<T>> {
    coeffs
        .iter()
        .map(|c| c.lower_bound(from).map(|lb| t.threshold(&val.ceil_scaled(&lb))))
        .collect()
}

fn scan<T: Int>(
    val: &Valuation,
    t: &Tables<T>,
    coeffs: &[Coeffs],
    closed: bool,
) -> Result<Option<(Surd, u64)>> {
    let one = Surd::rational(Rational::one());
    let start = scaled_bounds(val, t, coeffs, &Rational::zero());
    let local = fold_reduce(
        t.n(),
        t.m(),
        || Local {
            best: None,
            lb: start.clone(),
            own: Vec::new(),
        },
        |mut st: Local<T>, idx, a| {
            if st.best.as_ref().is_some_and(|(b, _)| *b == one) {
                return st;
            }
            t.own_into(a, &mut st.own);
            let pruned = st
                .own
                .iter()
                .zip(&st.lb)
                .any(|(u, lb)| lb.as_ref().is_some_and(|lb| u < lb));
            if pruned {
                return st;
            }
            let u: Vec<Rational> = st.own.iter().map(|x| val.unscale(x)).collect();
            let mut cands = vec![one.clone()];
            if closed {
                cands.push(Surd::rational(Rational::zero()));
            }
            for (c, ui) in coeffs.iter().zip(&u) {
                cands.extend(c.roots(ui).into_iter().filter(|r| {
                    r.cmp_rational(&Rational::one()).is_le() && r.cmp_rational(&Rational::zero()).is_gt()
                }));
            }
            cands.sort_by(|x, y| y.cmp(x));
            cands.dedup();
            let found = cands
                .into_iter()
                .take_while(|c| st.best.as_ref().is_none_or(|(b, _)| c > b))
                .find(|c| coeffs.iter().zip(&u).all(|(co, ui)| co.accepts(ui, c)));
            if let Some(alpha) = found {
                let from = alpha
                    .as_rational()
                    .cloned()
                    .unwrap_or_else(|| alpha.rational_below(48));
                st.lb = scaled_bounds(val, t, coeffs, &from);
                st.best = Some((alpha, idx));
            }
            st
        },
        |x, y| Local {
            best: better_first(x.best, y.best),
            lb: Vec::new(),
            own: Vec::new(),
        },
    )?;
    Ok(local.best)
}

/// Largest `alpha` for which some allocation satisfies the variant, by exhaustive search.
pub fn best_alpha(val: &Valuation, view: &ShareView, variant: AlphaVariant) -> Result<BestAlpha> {
    if view.space != val.space() || view.n() != val.n() {
        return Err(Error::MissingProfile);
    }
    let coeffs = variant.coefficients(view)?;
    let closed = variant.closed_at_zero(view);
    let best = with_tables!(val.scaled(), |t| scan(val, t, &coeffs, closed))?;
    let zero_mu = (0..view.n()).filter(|&i| view.mu[i].is_zero()).collect();
    let (alpha_star, witness) = match best {
        None => (AlphaStar::None, None),
        Some((a, idx)) => {
            let star = match a.as_rational() {
                Some(r) if *r == Rational::one() => AlphaStar::All,
                Some(r) => AlphaStar::Exact(r.clone()),
                None => AlphaStar::Irrational(a),
            };
            (star, Some(allocation_at(val.n(), val.m(), idx)))
        }
    };
    Ok(BestAlpha {
        alpha_star,
        witness,
        zero_mu,
    })
}

//! Quadratic surds `p + q * sqrt(d)` with exact ordering.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::rational::Rational;

/// `p + q * sqrt(d)`; when `q != 0` the radicand is positive and not a rational square.
#[derive(Debug, Clone)]
pub struct Surd {
    p: Rational,
    q: Rational,
    d: Rational,
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

fn sign(x: &Rational) -> Ordering {
    x.signum().cmp(&0)
}

impl Surd {
    pub fn rational(p: Rational) -> Surd {
        Surd {
            p,
            q: Rational::zero(),
            d: Rational::zero(),
        }
    }

    /// Panics on a negative radicand.
    pub fn new(p: Rational, q: Rational, d: Rational) -> Surd {
        assert!(!d.is_negative(), "negative radicand");
        if q.is_zero() || d.is_zero() {
            return Surd::rational(p);
        }
        if let (Some(a), Some(b)) = (exact_sqrt(d.numer()), exact_sqrt(d.denom())) {
            return Surd::rational(p + q * Rational::new(a, b));
        }
        Surd { p, q, d }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.q.is_zero().then_some(&self.p)
    }

    pub fn parts(&self) -> (&Rational, &Rational, &Rational) {
        (&self.p, &self.q, &self.d)
    }

    pub fn signum(&self) -> Ordering {
        let (sp, sq) = (sign(&self.p), sign(&self.q));
        if sq == Ordering::Equal || sp == sq {
            return sp;
        }
        if sp == Ordering::Equal {
            return sq;
        }
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * &self.d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// `a * x^2 + b * x + c` at `x = self`.
    pub fn quadratic(&self, a: &Rational, b: &Rational, c: &Rational) -> Surd {
        let (p, q, d) = (&self.p, &self.q, &self.d);
        let sq_p = p * p + q * q * d;
        let sq_q = Rational::from_integer(2) * p * q;
        Surd {
            p: a * &sq_p + b * p + c,
            q: a * &sq_q + b * q,
            d: d.clone(),
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        Surd {
            p: &self.p - r,
            q: self.q.clone(),
            d: self.d.clone(),
        }
        .signum()
    }

    /// Largest multiple of `2^-bits` (scaled by the radicand denominator) not above the value.
    pub fn rational_below(&self, bits: u32) -> Rational {
        self.bound(bits, false)
    }

    pub fn rational_above(&self, bits: u32) -> Rational {
        self.bound(bits, true)
    }

    fn bound(&self, bits: u32, upper: bool) -> Rational {
        if self.q.is_zero() {
            return self.p.clone();
        }
        let scale = BigInt::from(1u8) << bits;
        let ab = self.d.numer() * self.d.denom();
        let r = (&ab * &scale * &scale).sqrt();
        let den = self.d.denom() * &scale;
        let lo = Rational::new(r.clone(), den.clone());
        let hi = Rational::new(r + 1, den);
        let root = if self.q.is_positive() == upper { hi } else { lo };
        &self.p + &self.q * root
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * self.d.to_f64().sqrt()
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Surd {
        Surd::rational(r)
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Surd) -> Ordering {
        if self.d == other.d || other.q.is_zero() || self.q.is_zero() {
            let (q, d) = if self.q.is_zero() {
                (-&other.q, other.d.clone())
            } else if other.q.is_zero() {
                (self.q.clone(), self.d.clone())
            } else {
                (&self.q - &other.q, self.d.clone())
            };
            return Surd::new(&self.p - &other.p, q, d).signum();
        }
        // x = (p1 - p2) + q1 sqrt(d1) against y = q2 sqrt(d2).
        let x = Surd {
            p: &self.p - &other.p,
            q: self.q.clone(),
            d: self.d.clone(),
        };
        let (sx, sy) = (x.signum(), sign(&other.q));
        if sx != sy {
            return sx.cmp(&sy);
        }
        let y2 = &other.q * &other.q * &other.d;
        let t = x.quadratic(&Rational::one(), &Rational::zero(), &-y2).signum();
        if sx == Ordering::Less {
            t.reverse()
        } else {
            t
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Surd) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Surd {}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Surd) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.d)
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

//! The fixed numeric instances the claims are checked on.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Instance2D;
use crate::rational::{q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Two goods, two agents, strong negative externalities.
    Intro2Goods,
    /// Three agents, four chores; raw leximin is unfair.
    Example1Leximin,
    /// Two identical agents, six chores.
    Example2Propxe,
    /// Two identical agents, six goods with positive externality.
    PropProofGoods,
    /// Two identical agents, three chores with negative externality.
    ExampleChoresNeg,
    /// 12 goods, inverse externality, no alpha-MMS.
    VgGoods { e1: Rational, e2: Rational },
    /// 12 chores, inverse externality.
    VcChores { e1: Rational, e2: Rational },
    /// `VgGoods` with four raised entries, scaled by a further 10.
    VgAppendix { e1: Rational, e2: Rational, e3: Rational },
    /// Equitability is not preserved.
    EqCounterex,
    /// Egalitarian optima differ between the spaces.
    MewCounterex,
}

pub const BUILTIN_NAMES: &[&str] = &[
    "intro-2goods",
    "example1-leximin",
    "example2-propxe",
    "prop-proof-goods",
    "example-chores-neg",
    "vg-goods",
    "vc-chores",
    "vg-appendix",
    "eq-counterex",
    "mew-counterex",
];

/// `x` in `(lo, hi]` or `[lo, hi)`.
fn in_range(name: &str, x: &Rational, lo: &str, hi: &str, open_at: Open) -> Result<()> {
    let (lo, hi) = (q(lo), q(hi));
    let ok = match open_at {
        Open::Lo => *x > lo && *x <= hi,
        Open::Hi => *x >= lo && *x < hi,
    };
    if ok {
        Ok(())
    } else {
        let shown = match open_at {
            Open::Lo => format!("({lo}, {hi}]"),
            Open::Hi => format!("[{lo}, {hi})"),
        };
        Err(Error::BadEpsilon(format!("{name} = {x} is outside {shown}")))
    }
}

#[derive(Clone, Copy)]
enum Open {
    Lo,
    Hi,
}

impl Builtin {
    pub fn vg_goods() -> Builtin {
        Builtin::VgGoods {
            e1: q("1/10000"),
            e2: q("1/1000"),
        }
    }

    pub fn vc_chores() -> Builtin {
        Builtin::VcChores {
            e1: q("1/10000"),
            e2: q("-1/1000"),
        }
    }

    pub fn vg_appendix() -> Builtin {
        Builtin::VgAppendix {
            e1: q("1/100000"),
            e2: q("1/1000"),
            e3: q("1/10000"),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Intro2Goods => "intro-2goods",
            Builtin::Example1Leximin => "example1-leximin",
            Builtin::Example2Propxe => "example2-propxe",
            Builtin::PropProofGoods => "prop-proof-goods",
            Builtin::ExampleChoresNeg => "example-chores-neg",
            Builtin::VgGoods { .. } => "vg-goods",
            Builtin::VcChores { .. } => "vc-chores",
            Builtin::VgAppendix { .. } => "vg-appendix",
            Builtin::EqCounterex => "eq-counterex",
            Builtin::MewCounterex => "mew-counterex",
        }
    }

    fn epsilons(&self) -> Vec<&Rational> {
        match self {
            Builtin::VgGoods { e1, e2 } | Builtin::VcChores { e1, e2 } => vec![e1, e2],
            Builtin::VgAppendix { e1, e2, e3 } => vec![e1, e2, e3],
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Builtin::VgGoods { e1, e2 } => {
                in_range("e1", e1, "0", "1/10000", Open::Lo)?;
                in_range("e2", e2, "0", "1/1000", Open::Lo)
            }
            Builtin::VcChores { e1, e2 } => {
                in_range("e1", e1, "0", "1/10000", Open::Lo)?;
                in_range("e2", e2, "-1/1000", "0", Open::Hi)
            }
            Builtin::VgAppendix { e1, e2, e3 } => {
                in_range("e1", e1, "0", "1/100000", Open::Lo)?;
                in_range("e2", e2, "0", "1/1000", Open::Lo)?;
                in_range("e3", e3, "0", "1/10000", Open::Lo)
            }
            _ => Ok(()),
        }
    }

    pub fn instance(&self) -> Result<Instance2D> {
        self.validate()?;
        match self {
            Builtin::Intro2Goods => pairs(
                "g",
                &[&[("6", "-1"), ("5", "-100")], &[("5", "-100"), ("6", "-1")]],
            ),
            Builtin::Example1Leximin => {
                let a: &[(&str, &str)] = &[("-30", "1"), ("-20", "1"), ("-30", "1"), ("-30", "1")];
                let c: &[(&str, &str)] = &[("-1", "40"); 4];
                pairs("c", &[a, a, c])
            }
            Builtin::Example2Propxe => {
                let a: &[(&str, &str)] =
                    &[("-9", "1"), ("-11", "1"), ("-12", "1"), ("-13", "1"), ("-9", "1"), ("-1", "38")];
                pairs("c", &[a, a])
            }
            Builtin::PropProofGoods => {
                let a: &[(&str, &str)] = &[
                    ("0.5", "0.1"),
                    ("0.5", "0.1"),
                    ("0.3", "0.1"),
                    ("0.5", "0.1"),
                    ("0.5", "0.1"),
                    ("0.5", "0.1"),
                ];
                pairs("g", &[a, a])
            }
            Builtin::ExampleChoresNeg => {
                let a: &[(&str, &str)] = &[("-40", "-36"), ("-110", "-70"), ("-109", "-71")];
                pairs("c", &[a, a])
            }
            Builtin::VgGoods { e1, e2 } => Ok(table(e1, e2, None, &q("1000"))),
            Builtin::VcChores { e1, e2 } => Ok(table(e1, e2, None, &q("-1000"))),
            Builtin::VgAppendix { e1, e2, e3 } => Ok(table(e1, e2, Some(e3), &q("10000"))),
            Builtin::EqCounterex => pairs(
                "g",
                &[
                    &[("3", "-6"), ("3", "-6"), ("1", "-3"), ("1", "-3")],
                    &[("1", "-8"), ("1", "-8"), ("3", "-6"), ("3", "-6")],
                ],
            ),
            Builtin::MewCounterex => pairs(
                "g",
                &[&[("8", "-16"), ("10", "-15")], &[("5", "-1"), ("6", "-2")]],
            ),
        }
    }
}

fn pairs(prefix: &str, rows: &[&[(&str, &str)]]) -> Result<Instance2D> {
    let m = rows.first().map_or(0, |r| r.len());
    let ids = (1..=m).map(|k| format!("{prefix}{k}")).collect();
    Instance2D::from_pairs(
        ids,
        rows.iter()
            .map(|r| r.iter().map(|(v, p)| (q(v), q(p))).collect())
            .collect(),
    )
}

#[derive(Clone, Copy)]
enum Cell {
    /// `(c - e1, -e1)`.
    High,
    /// `(2 e1, -c + 2 e1 + e2)`.
    Low,
    /// `(3 e2, -c + 3 e1 - 3 e2)`.
    First,
}

/// Base value and pattern per item; columns are agents.
const TABLE: [(i64, [Cell; 3]); 12] = {
    use Cell::{First as F, High as H, Low as L};
    [
        (1017, [F, F, F]),
        (1025, [L, L, H]),
        (1012, [L, H, L]),
        (1001, [L, H, H]),
        (1002, [H, L, H]),
        (1022, [H, H, H]),
        (1003, [H, H, L]),
        (1028, [H, H, H]),
        (1011, [H, L, H]),
        (1000, [H, H, H]),
        (1021, [H, H, H]),
        (1023, [H, H, L]),
    ]
};

/// With `e3`, the raised entries: agents 0 and 1 on item 9, agent 0 on
/// item 3, every agent on item 7.
fn raised(agent: usize, item: usize) -> bool {
    matches!((agent, item), (0 | 1, 9) | (0, 3) | (_, 7))
}

fn table(e1: &Rational, e2: &Rational, e3: Option<&Rational>, scale: &Rational) -> Instance2D {
    let r = Rational::from_integer;
    let rows = (0..3)
        .map(|i| {
            TABLE
                .iter()
                .enumerate()
                .map(|(k, (c, cells))| {
                    let c = r(*c);
                    let (v, p) = match (cells[i], e3) {
                        (_, Some(e3)) if raised(i, k) => (&c - e1 + e3, -e1.clone()),
                        (Cell::High, _) => (&c - e1, -e1.clone()),
                        (Cell::Low, _) => (r(2) * e1, -c + r(2) * e1 + e2),
                        (Cell::First, _) => (r(3) * e2, -c + r(3) * e1 - r(3) * e2),
                    };
                    (v * scale, p * scale)
                })
                .collect()
        })
        .collect();
    let ids = (1..=12).map(|k| format!("k{k}")).collect();
    Instance2D::from_pairs(ids, rows).expect("3 x 12 table")
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let eps = self.epsilons();
        if !eps.is_empty() {
            let parts: Vec<String> = eps.iter().map(|e| e.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// A name from [`BUILTIN_NAMES`], optionally with epsilons: `vc-chores(1/20000,-1/1000)`.
    fn from_str(s: &str) -> Result<Builtin> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Unsupported(format!("builtin {s:?}")))?;
                let args = inner
                    .split(',')
                    .map(|x| x.trim().parse::<Rational>())
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                (name, Some(args))
            }
            None => (s, None),
        };
        let key = name.to_ascii_lowercase().replace('_', "-");
        let base = match key.as_str() {
            "intro-2goods" => Builtin::Intro2Goods,
            "example1-leximin" => Builtin::Example1Leximin,
            "example2-propxe" => Builtin::Example2Propxe,
            "prop-proof-goods" => Builtin::PropProofGoods,
            "example-chores-neg" => Builtin::ExampleChoresNeg,
            "vg-goods" => Builtin::vg_goods(),
            "vc-chores" => Builtin::vc_chores(),
            "vg-appendix" => Builtin::vg_appendix(),
            "eq-counterex" => Builtin::EqCounterex,
            "mew-counterex" => Builtin::MewCounterex,
            _ => return Err(Error::Unsupported(format!("builtin {s:?}"))),
        };
        let Some(args) = args else { return Ok(base) };
        let arity = base.epsilons().len();
        if args.len() != arity {
            return Err(Error::BadEpsilon(format!("{key} takes {arity} epsilons, got {}", args.len())));
        }
        let mut a = args.into_iter();
        let mut next = || a.next().expect("arity checked");
        Ok(match base {
            Builtin::VgGoods { .. } => Builtin::VgGoods { e1: next(), e2: next() },
            Builtin::VcChores { .. } => Builtin::VcChores { e1: next(), e2: next() },
            Builtin::VgAppendix { .. } => Builtin::VgAppendix {
                e1: next(),
                e2: next(),
                e3: next(),
            },
            other => other,
        })
    }
}

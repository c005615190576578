use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Notion {
    Ef,
    Ef1,
    Efx,
    Prop,
    PropE,
    Prop1E,
    PropxE,
    AvgShare,
    Mms,
    AlphaMms(Rational),
    ShiftedAlphaMms(Rational),
    Mms1,
    Mmsx,
    AlphaMmsI(Rational),
    AlphaMmsII(Rational),
    Eq,
    Eq1,
    Eqx,
    Po,
    Muw,
    Mew,
    LeximinOpt,
}

/// Names accepted by [`Notion::parse`], in display order.
pub const NOTION_NAMES: &[&str] = &[
    "ef",
    "ef1",
    "efx",
    "prop",
    "prop-e",
    "prop1-e",
    "propx-e",
    "avg-share",
    "mms",
    "alpha-mms",
    "shifted-alpha-mms",
    "mms1",
    "mmsx",
    "alpha-mms-i",
    "alpha-mms-ii",
    "eq",
    "eq1",
    "eqx",
    "po",
    "muw",
    "mew",
    "leximin-opt",
];

impl Notion {
    /// Parses a lower-kebab name; parameterized notions take `alpha`.
    pub fn parse(name: &str, alpha: Option<&Rational>) -> Result<Notion> {
        let need = |ctor: fn(Rational) -> Notion| {
            alpha
                .cloned()
                .map(ctor)
                .ok_or_else(|| Error::InvalidInstance(format!("{name} needs an alpha")))
        };
        let key = name.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "ef" => Notion::Ef,
            "ef1" => Notion::Ef1,
            "efx" => Notion::Efx,
            "prop" => Notion::Prop,
            "prop-e" => Notion::PropE,
            "prop1-e" => Notion::Prop1E,
            "propx-e" => Notion::PropxE,
            "avg-share" | "average-share" => Notion::AvgShare,
            "mms" => Notion::Mms,
            "alpha-mms" => need(Notion::AlphaMms)?,
            "shifted-alpha-mms" => need(Notion::ShiftedAlphaMms)?,
            "mms1" => Notion::Mms1,
            "mmsx" => Notion::Mmsx,
            "alpha-mms-i" => need(Notion::AlphaMmsI)?,
            "alpha-mms-ii" => need(Notion::AlphaMmsII)?,
            "eq" => Notion::Eq,
            "eq1" => Notion::Eq1,
            "eqx" => Notion::Eqx,
            "po" => Notion::Po,
            "muw" => Notion::Muw,
            "mew" => Notion::Mew,
            "leximin-opt" | "leximin" => Notion::LeximinOpt,
            _ => return Err(Error::InvalidInstance(format!("unknown notion {name:?}"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Notion::Ef => "ef",
            Notion::Ef1 => "ef1",
            Notion::Efx => "efx",
            Notion::Prop => "prop",
            Notion::PropE => "prop-e",
            Notion::Prop1E => "prop1-e",
            Notion::PropxE => "propx-e",
            Notion::AvgShare => "avg-share",
            Notion::Mms => "mms",
            Notion::AlphaMms(_) => "alpha-mms",
            Notion::ShiftedAlphaMms(_) => "shifted-alpha-mms",
            Notion::Mms1 => "mms1",
            Notion::Mmsx => "mmsx",
            Notion::AlphaMmsI(_) => "alpha-mms-i",
            Notion::AlphaMmsII(_) => "alpha-mms-ii",
            Notion::Eq => "eq",
            Notion::Eq1 => "eq1",
            Notion::Eqx => "eqx",
            Notion::Po => "po",
            Notion::Muw => "muw",
            Notion::Mew => "mew",
            Notion::LeximinOpt => "leximin-opt",
        }
    }

    pub fn alpha(&self) -> Option<&Rational> {
        match self {
            Notion::AlphaMms(a)
            | Notion::ShiftedAlphaMms(a)
            | Notion::AlphaMmsI(a)
            | Notion::AlphaMmsII(a) => Some(a),
            _ => None,
        }
    }

    pub fn needs_profile(&self) -> bool {
        matches!(
            self,
            Notion::Mms
                | Notion::AlphaMms(_)
                | Notion::ShiftedAlphaMms(_)
                | Notion::Mms1
                | Notion::Mmsx
                | Notion::AlphaMmsI(_)
                | Notion::AlphaMmsII(_)
        )
    }

    /// Notions whose verdict depends on every other allocation.
    pub fn is_global(&self) -> bool {
        matches!(self, Notion::Po | Notion::Muw | Notion::Mew | Notion::LeximinOpt)
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}({a})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl std::str::FromStr for Notion {
    type Err = Error;

    /// Accepts `name` or `name(alpha)`.
    fn from_str(s: &str) -> Result<Notion> {
        match s.split_once('(') {
            Some((name, rest)) => {
                let alpha: Rational = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidInstance(format!("bad notion {s:?}")))?
                    .parse()?;
                Notion::parse(name, Some(&alpha))
            }
            None => Notion::parse(s, None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn every_name_parses() {
        let half = q("1/2");
        for name in NOTION_NAMES {
            let n = Notion::parse(name, Some(&half)).unwrap();
            assert_eq!(n.name(), *name);
            let back: Notion = n.to_string().parse().unwrap();
            assert_eq!(back, n);
        }
    }

    #[test]
    fn alpha_is_required_where_used() {
        assert!(Notion::parse("alpha-mms", None).is_err());
        assert!(Notion::parse("ef1", None).is_ok());
        assert!(Notion::parse("PROP1_E", None).is_ok());
        assert!(Notion::parse("envy-ish", None).is_err());
    }
}

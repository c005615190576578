//! Schema-tagged JSON documents for instances and allocations.
//!
//! Numbers are JSON strings so they survive exactly: integers, `p/q`
//! fractions and exact decimals are read, and `p/q` in lowest terms is written.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, FullInstance, Instance1D, Instance2D};
use crate::rational::Rational;

pub const SCHEMA_2D: &str = "extfair/instance-2d/1";
pub const SCHEMA_1D: &str = "extfair/instance-1d/1";
pub const SCHEMA_FULL: &str = "extfair/instance-full/1";
pub const SCHEMA_ALLOC: &str = "extfair/alloc/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc<R> {
    schema: String,
    agents: usize,
    items: Vec<String>,
    valuations: Vec<R>,
    /// `v'_i(M)` per agent, only on transform output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shift: Option<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Row2 {
    v: Vec<Rational>,
    vprime: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Row1 {
    w: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowFull {
    v_full: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocDoc {
    schema: String,
    assignment: Vec<usize>,
}

/// Any instance document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceDoc {
    TwoD(Instance2D),
    OneD { instance: Instance1D, shift: Option<Vec<Rational>> },
    Full(FullInstance),
}

fn bad(e: impl std::fmt::Display) -> Error {
    Error::Document(e.to_string())
}

fn typed<R: DeserializeOwned>(value: serde_json::Value) -> Result<Doc<R>> {
    let doc: Doc<R> = serde_json::from_value(value).map_err(bad)?;
    if doc.agents != doc.valuations.len() {
        return Err(bad(format!(
            "agents is {} but {} valuation records are given",
            doc.agents,
            doc.valuations.len()
        )));
    }
    Ok(doc)
}

fn schema_of(value: &serde_json::Value) -> Result<String> {
    value
        .get("schema")
        .and_then(|s| s.as_str())
        .map(str::to_owned)
        .ok_or_else(|| bad("missing \"schema\""))
}

pub fn parse_instance(text: &str) -> Result<InstanceDoc> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
    match schema_of(&value)?.as_str() {
        SCHEMA_2D => {
            let doc = typed::<Row2>(value)?;
            let (v, vprime) = doc.valuations.into_iter().map(|r| (r.v, r.vprime)).unzip();
            Ok(InstanceDoc::TwoD(Instance2D::new(doc.items, v, vprime)?))
        }
        SCHEMA_1D => {
            let doc = typed::<Row1>(value)?;
            if doc.shift.as_ref().is_some_and(|s| s.len() != doc.agents) {
                return Err(bad("shift needs one entry per agent"));
            }
            let w = doc.valuations.into_iter().map(|r| r.w).collect();
            Ok(InstanceDoc::OneD {
                instance: Instance1D::new(doc.items, w)?,
                shift: doc.shift,
            })
        }
        SCHEMA_FULL => {
            let doc = typed::<RowFull>(value)?;
            let t = doc.valuations.into_iter().map(|r| r.v_full).collect();
            Ok(InstanceDoc::Full(FullInstance::new(doc.items, t)?))
        }
        other => Err(bad(format!("unknown schema {other:?}"))),
    }
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn write_instance(doc: &InstanceDoc) -> String {
    match doc {
        InstanceDoc::TwoD(inst) => pretty(&Doc {
            schema: SCHEMA_2D.into(),
            agents: inst.n(),
            items: inst.item_ids().to_vec(),
            valuations: inst
                .v_rows()
                .iter()
                .zip(inst.vprime_rows())
                .map(|(v, vprime)| Row2 {
                    v: v.clone(),
                    vprime: vprime.clone(),
                })
                .collect(),
            shift: None,
        }),
        InstanceDoc::OneD { instance, shift } => pretty(&Doc {
            schema: SCHEMA_1D.into(),
            agents: instance.n(),
            items: instance.item_ids().to_vec(),
            valuations: instance.rows().iter().map(|w| Row1 { w: w.clone() }).collect(),
            shift: shift.clone(),
        }),
        InstanceDoc::Full(inst) => pretty(&Doc {
            schema: SCHEMA_FULL.into(),
            agents: inst.n(),
            items: inst.item_ids().to_vec(),
            valuations: inst
                .tensor()
                .iter()
                .map(|plane| RowFull { v_full: plane.clone() })
                .collect(),
            shift: None,
        }),
    }
}

pub fn write_instance_2d(inst: &Instance2D) -> String {
    write_instance(&InstanceDoc::TwoD(inst.clone()))
}

pub fn parse_allocation(text: &str) -> Result<Allocation> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
    let schema = schema_of(&value)?;
    if schema != SCHEMA_ALLOC {
        return Err(bad(format!("expected schema {SCHEMA_ALLOC:?}, got {schema:?}")));
    }
    let doc: AllocDoc = serde_json::from_value(value).map_err(bad)?;
    Ok(Allocation::new(doc.assignment))
}

pub fn write_allocation(alloc: &Allocation) -> String {
    pretty(&AllocDoc {
        schema: SCHEMA_ALLOC.into(),
        assignment: alloc.assignment().to_vec(),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: &Path) -> Result<InstanceDoc> {
    parse_instance(&read(path)?)
}

pub fn read_allocation(path: &Path) -> Result<Allocation> {
    parse_allocation(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const INTRO: &str = r#"{
  "schema": "extfair/instance-2d/1",
  "agents": 2,
  "items": ["g1", "g2"],
  "valuations": [
    {"v": ["6", "5"], "vprime": ["-1", "-100"]},
    {"v": ["5", "6"], "vprime": ["-100", "-1"]}
  ]
}"#;

    #[test]
    fn two_d_round_trip() {
        let doc = parse_instance(INTRO).unwrap();
        let InstanceDoc::TwoD(inst) = &doc else { panic!("2-D") };
        assert_eq!(inst.vprime(0, 1), &q("-100"));
        let text = write_instance(&doc);
        assert_eq!(parse_instance(&text).unwrap(), doc);
        assert_eq!(write_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn decimals_become_fractions() {
        let text = INTRO.replace("\"-1\", \"-100\"", "\"0.0001\", \"3/1000\"");
        let doc = parse_instance(&text).unwrap();
        let out = write_instance(&doc);
        assert!(out.contains("\"1/10000\""));
        assert!(out.contains("\"3/1000\""));
    }

    #[test]
    fn malformed_is_rejected() {
        for text in [
            "not json",
            "{}",
            r#"{"schema": "extfair/instance-9d/1"}"#,
            &INTRO.replace("\"-100\", \"-1\"", "\"-100\", \"1.\""),
            &INTRO.replace("\"agents\": 2", "\"agents\": 3"),
            &INTRO.replace("\"6\", \"5\"", "6, 5"),
            &INTRO.replace("\"6\", \"5\"", "\"6\""),
        ] {
            assert!(parse_instance(text).is_err(), "{text}");
        }
    }

    #[test]
    fn one_d_with_shift_and_full() {
        let inst = Instance1D::from_rows(vec![vec![q("7"), q("105")]]).unwrap();
        let doc = InstanceDoc::OneD {
            instance: inst,
            shift: Some(vec![q("-101")]),
        };
        assert_eq!(parse_instance(&write_instance(&doc)).unwrap(), doc);
        let full = InstanceDoc::Full(FullInstance::from_tensor(vec![vec![vec![q("1/2")]]]).unwrap());
        assert_eq!(parse_instance(&write_instance(&full)).unwrap(), full);
    }

    #[test]
    fn allocation_round_trip() {
        let a = Allocation::new(vec![0, 2, 1]);
        let text = write_allocation(&a);
        assert_eq!(parse_allocation(&text).unwrap(), a);
        assert!(parse_allocation(r#"{"schema": "extfair/alloc/1", "assignment": [-1]}"#).is_err());
        assert!(parse_allocation(r#"{"schema": "extfair/alloc/2", "assignment": []}"#).is_err());
    }
}

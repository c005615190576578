//! Built-in instances and a suite of claims checked against them.
//!
//! Each claim states an expected outcome and computes the actual one by
//! exhaustive search. A mismatch is a `Discrepancy`; a result that fails its
//! own consistency checks (a witness that does not re-check, two solvers that
//! disagree) is a `Fail`.

mod builtins;
mod claims;

use serde::Serialize;
use serde_json::{json, Value};

use crate::checkers::{check, Notion, Verdict, Witness};
use crate::error::{Error, Result};
use crate::kernel::Space;
use crate::model::{Allocation, Instance2D};
use crate::rational::Rational;
use crate::utility::holding_2d;

pub use builtins::{Builtin, BUILTIN_NAMES};
pub use claims::{property_corpus, retention_disagreements, CLAIM_IDS, RETAINED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Discrepancy,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Discrepancy => "DISCREPANCY",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    /// Always has a `checks` array of re-checkable verdicts, see [`recheck`].
    pub evidence: Value,
}

/// What a claim body reports back.
pub(crate) struct Outcome {
    expected: String,
    computed: String,
    matches: bool,
    log: Log,
    extra: Value,
}

/// Verdicts gathered while a claim runs, plus any self-inconsistency found.
#[derive(Default)]
pub(crate) struct Log {
    checks: Vec<Value>,
    problems: Vec<String>,
}

impl Log {
    /// Checks `notion` on the instance called `label` and records the verdict.
    pub(crate) fn check(
        &mut self,
        label: &str,
        inst: &Instance2D,
        space: Space,
        notion: Notion,
        alloc: &Allocation,
    ) -> Result<bool> {
        let v = check(inst, space, &notion, alloc)?;
        if let Some(p) = witness_problem(inst, space, alloc, &v) {
            self.problems.push(format!("{label} {space} {notion}: {p}"));
        }
        self.checks.push(json!({
            "instance": label,
            "space": space,
            "notion": notion.to_string(),
            "allocation": alloc,
            "holds": v.holds,
            "witness": v.witness,
        }));
        Ok(v.holds)
    }

    pub(crate) fn problem(&mut self, p: impl Into<String>) {
        self.problems.push(p.into());
    }

    pub(crate) fn require(&mut self, ok: bool, p: impl Into<String>) {
        if !ok {
            self.problem(p);
        }
    }
}

impl Outcome {
    pub(crate) fn new(expected: impl Into<String>, computed: impl Into<String>, matches: bool, log: Log) -> Outcome {
        Outcome {
            expected: expected.into(),
            computed: computed.into(),
            matches,
            log,
            extra: Value::Null,
        }
    }

    pub(crate) fn with(mut self, extra: Value) -> Outcome {
        self.extra = extra;
        self
    }
}

fn u(inst: &Instance2D, space: Space, i: usize, held: impl Fn(usize) -> bool) -> Rational {
    let raw = holding_2d(inst, i, held);
    match space {
        Space::W => raw - inst.vprime_total(i),
        _ => raw,
    }
}

/// Recomputes the plain utilities a witness quotes, straight from the instance.
fn witness_problem(inst: &Instance2D, space: Space, alloc: &Allocation, v: &Verdict) -> Option<String> {
    let w = v.witness.as_ref()?;
    let own = |i: usize| u(inst, space, i, |k| alloc.owner(k) == i);
    match w {
        Witness::Pair {
            agent,
            other,
            item,
            lhs,
            rhs,
        } => {
            if lhs >= rhs {
                return Some(format!("pair witness {lhs} >= {rhs}"));
            }
            if item.is_none() {
                let (i, j) = (*agent, *other);
                let ui = own(i);
                // envy compares against holding the other bundle, equity against the other's own
                let alt = [u(inst, space, i, |k| alloc.owner(k) == j), own(j)];
                if ui != *lhs || !alt.contains(rhs) {
                    return Some(format!("pair witness ({lhs}, {rhs}) does not match utilities"));
                }
            }
            None
        }
        Witness::Share {
            agent,
            item,
            utility,
            threshold,
        } => {
            if utility >= threshold {
                return Some(format!("share witness {utility} >= {threshold}"));
            }
            if item.is_none() && *utility != own(*agent) {
                return Some(format!("share witness utility {utility} is not u_{agent}"));
            }
            None
        }
        Witness::Dominated { by } | Witness::Better { by } => {
            if by.validate(inst.n(), inst.m()).is_err() {
                return Some("witness allocation is invalid".into());
            }
            let a: Vec<Rational> = (0..inst.n()).map(own).collect();
            let b: Vec<Rational> = (0..inst.n())
                .map(|i| u(inst, space, i, |k| by.owner(k) == i))
                .collect();
            let weakly = a.iter().zip(&b).all(|(x, y)| y >= x);
            let strictly = a.iter().zip(&b).any(|(x, y)| y > x);
            match w {
                Witness::Dominated { .. } if !(weakly && strictly) => {
                    Some("dominating witness does not dominate".into())
                }
                _ => None,
            }
        }
    }
}

/// Resolves an evidence `instance` label: a builtin, optionally suffixed
/// with `+no-externality` to zero every `v'`.
pub fn evidence_instance(label: &str) -> Result<Instance2D> {
    let (name, strip) = match label.strip_suffix("+no-externality") {
        Some(name) => (name, true),
        None => (label, false),
    };
    let inst = name.parse::<Builtin>()?.instance()?;
    if !strip {
        return Ok(inst);
    }
    let zeros = vec![vec![Rational::zero(); inst.m()]; inst.n()];
    Instance2D::new(inst.item_ids().to_vec(), inst.v_rows().to_vec(), zeros)
}

/// Re-runs every recorded verdict of `result`; returns the ones that differ.
pub fn recheck(result: &ClaimResult) -> Result<Vec<Value>> {
    let mut differ = Vec::new();
    let checks = result.evidence["checks"].as_array().cloned().unwrap_or_default();
    for c in checks {
        let bad = |what: &str| Error::Document(format!("evidence field {what} in {}", result.id));
        let inst = evidence_instance(c["instance"].as_str().ok_or_else(|| bad("instance"))?)?;
        let space: Space = serde_json::from_value(c["space"].clone()).map_err(|_| bad("space"))?;
        let notion: Notion = c["notion"].as_str().ok_or_else(|| bad("notion"))?.parse()?;
        let alloc: Allocation = serde_json::from_value(c["allocation"].clone()).map_err(|_| bad("allocation"))?;
        let holds = c["holds"].as_bool().ok_or_else(|| bad("holds"))?;
        if check(&inst, space, &notion, &alloc)?.holds != holds {
            differ.push(c);
        }
    }
    Ok(differ)
}

fn finish(id: &str, outcome: Result<Outcome>) -> ClaimResult {
    match outcome {
        Ok(o) => {
            let status = if !o.log.problems.is_empty() {
                Status::Fail
            } else if o.matches {
                Status::Pass
            } else {
                Status::Discrepancy
            };
            ClaimResult {
                id: id.into(),
                expected: o.expected,
                computed: o.computed,
                status,
                evidence: json!({
                    "checks": o.log.checks,
                    "problems": o.log.problems,
                    "details": o.extra,
                }),
            }
        }
        Err(e) => ClaimResult {
            id: id.into(),
            expected: String::new(),
            computed: format!("error: {e}"),
            status: Status::Fail,
            evidence: json!({ "checks": [], "problems": [e.to_string()], "details": null }),
        },
    }
}

/// Claim ids in `filter` that are not registered.
pub fn unknown_claims(filter: &[String]) -> Vec<String> {
    filter
        .iter()
        .filter(|f| !CLAIM_IDS.iter().any(|id| id.eq_ignore_ascii_case(f.trim())))
        .cloned()
        .collect()
}

/// Runs the registered claims, all of them or those named in `filter`
/// (case-insensitive). Results are ordered by claim id.
pub fn run_suite(filter: Option<&[String]>) -> Vec<ClaimResult> {
    let selected: Vec<_> = claims::registry()
        .into_iter()
        .filter(|(id, _)| filter.is_none_or(|f| f.iter().any(|x| x.trim().eq_ignore_ascii_case(id))))
        .collect();
    #[cfg(feature = "parallel")]
    let mut out: Vec<ClaimResult> = {
        use rayon::prelude::*;
        selected.into_par_iter().map(|(id, run)| finish(id, run())).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut out: Vec<ClaimResult> = selected.into_iter().map(|(id, run)| finish(id, run())).collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn empty_filter_runs_nothing() {
        assert!(run_suite(Some(&[])).is_empty());
    }

    #[test]
    fn unknown_ids_are_reported() {
        let f = vec!["lemma2".to_string(), "nope".to_string()];
        assert_eq!(unknown_claims(&f), vec!["nope".to_string()]);
    }

    #[test]
    fn witness_check_catches_forged_values() {
        let inst = Builtin::Intro2Goods.instance().unwrap();
        let a = Allocation::new(vec![0, 1]);
        let mut v = check(&inst, Space::V, &Notion::Ef, &a).unwrap();
        assert!(witness_problem(&inst, Space::V, &a, &v).is_none());
        if let Some(Witness::Pair { lhs, .. }) = &mut v.witness {
            *lhs = q("-95");
        }
        assert!(witness_problem(&inst, Space::V, &a, &v).is_some());
    }

    #[test]
    fn stripped_label() {
        let inst = evidence_instance("intro-2goods+no-externality").unwrap();
        assert_eq!(inst.vprime_total(0), q("0"));
        assert_eq!(inst.v(0, 0), &q("6"));
    }
}

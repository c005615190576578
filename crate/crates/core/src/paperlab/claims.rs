use serde_json::json;

use super::{Builtin, Log, Outcome};
use crate::allocators::{exhaustive_opt, search_predicate_with, Objective};
use crate::checkers::{check_full, search_fullext_gap, Checker, GapDirection, Notion};
use crate::enumerate::enumerate_allocations;
use crate::error::Result;
use crate::gen::{corpus, corpus_of};
use crate::kernel::{Space, Valuation};
use crate::mms::{best_alpha, verify_shift_identity, AlphaStar, AlphaVariant, BestAlpha, MmsProfile};
use crate::model::{Allocation, Instance2D, Kind};
use crate::rational::{q, Rational};
use crate::transform::{transform, verify_lemma1};
use crate::utility::utility_2d;

type Run = fn() -> Result<Outcome>;

pub const CLAIM_IDS: &[&str] = &[
    "COUNTEREX_CHORES",
    "COUNTEREX_GOODS",
    "EF_IMPLIES_PROP_E",
    "EQ_NONRETENTION",
    "EXAMPLE1_LEXIMIN_V",
    "EXAMPLE1_LEXIMIN_W",
    "EXAMPLE2",
    "FULLEXT_GAP",
    "INTRO_EF",
    "INTRO_PROP",
    "LEMMA1",
    "LEMMA2",
    "LEMMA3",
    "LEMMA6",
    "LEMMA7",
    "MEW_NONRETENTION",
    "MMS_CORRELATED_GOODS",
    "MMS_EXAMPLE5",
    "PROP_E_AVG_SHARE",
    "SHIFT_IDENTITY",
    "TRANSFORM_INTRO",
    "TRANSFORM_RETENTION",
    "VC_PROFILE",
    "VG_APPENDIX_PROFILE",
    "VG_INTEGRAL",
    "VG_PROFILE",
];

pub(super) fn registry() -> Vec<(&'static str, Run)> {
    let runs: [Run; 26] = [
        counterex_chores,
        counterex_goods,
        ef_implies_prop_e,
        eq_nonretention,
        example1_leximin_v,
        example1_leximin_w,
        example2,
        fullext_gap,
        intro_ef,
        intro_prop,
        lemma1,
        lemma2,
        lemma3,
        lemma6,
        lemma7,
        mew_nonretention,
        mms_correlated_goods,
        mms_example5,
        prop_e_avg_share,
        shift_identity,
        transform_intro,
        transform_retention,
        vc_profile,
        vg_appendix_profile,
        vg_integral,
        vg_profile,
    ];
    CLAIM_IDS.iter().copied().zip(runs).collect()
}

fn alloc(a: &[usize]) -> Allocation {
    Allocation::new(a.to_vec())
}

fn show(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(", "))
}

fn yes(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn transform_intro() -> Result<Outcome> {
    let inst = Builtin::Intro2Goods.instance()?;
    let t = transform(&inst);
    let row = t.one_d.rows()[0].clone();
    let want = [q("7"), q("105")];
    Ok(Outcome::new(
        "agent 1: w = (7, 105)",
        format!("agent 1: w = {}", show(&row)),
        row == want,
        Log::default(),
    )
    .with(json!({ "w": t.one_d.rows(), "shift": t.shift })))
}

fn intro_ef() -> Result<Outcome> {
    let b = Builtin::Intro2Goods;
    let inst = b.instance()?;
    let plain = super::evidence_instance("intro-2goods+no-externality")?;
    let a = alloc(&[0, 1]);
    let mut log = Log::default();
    let without = log.check("intro-2goods+no-externality", &plain, Space::W, Notion::Ef, &a)?;
    let with = log.check("intro-2goods", &inst, Space::V, Notion::Ef, &a)?;
    Ok(Outcome::new(
        "{g1 | g2}: EF without externalities, not EF with them",
        format!("EF without: {}, EF with: {}", yes(without), yes(with)),
        without && !with,
        log,
    ))
}

fn intro_prop() -> Result<Outcome> {
    let inst = Builtin::Intro2Goods.instance()?;
    let plain = super::evidence_instance("intro-2goods+no-externality")?;
    let a = alloc(&[1, 0]);
    let mut log = Log::default();
    let ef = log.check("intro-2goods", &inst, Space::V, Notion::Ef, &a)?;
    let prop = log.check("intro-2goods+no-externality", &plain, Space::W, Notion::Prop, &a)?;
    Ok(Outcome::new(
        "{g2 | g1}: EF with externalities, not PROP (share 11/2)",
        format!("EF: {}, PROP: {}", yes(ef), yes(prop)),
        ef && !prop,
        log,
    ))
}

fn example1_leximin_v() -> Result<Outcome> {
    let label = "example1-leximin";
    let inst = Builtin::Example1Leximin.instance()?;
    let a = exhaustive_opt(&inst, Objective::Leximin, Space::V)?;
    let mut log = Log::default();
    let opt = log.check(label, &inst, Space::V, Notion::LeximinOpt, &a)?;
    log.require(opt, "exhaustive leximin optimum is rejected by the leximin checker");
    let prop1 = log.check(label, &inst, Space::V, Notion::Prop1E, &a)?;
    let all_to_3 = a.assignment() == [2, 2, 2, 2];
    Ok(Outcome::new(
        "leximin on V gives {-, -, c1..c4}, which is not PROP1-E",
        format!("leximin on V gives {:?}, PROP1-E {}", a.assignment(), yes(prop1)),
        all_to_3 && !prop1,
        log,
    ))
}

fn example1_leximin_w() -> Result<Outcome> {
    let label = "example1-leximin";
    let inst = Builtin::Example1Leximin.instance()?;
    let a = exhaustive_opt(&inst, Objective::Leximin, Space::W)?;
    let quoted = alloc(&[2, 1, 0, 1]);
    let mut log = Log::default();
    let mut ok = true;
    for x in [&a, &quoted] {
        ok &= log.check(label, &inst, Space::W, Notion::LeximinOpt, x)?;
        ok &= log.check(label, &inst, Space::V, Notion::Prop1E, x)?;
        ok &= log.check(label, &inst, Space::V, Notion::Po, x)?;
    }
    log.require(
        log.checks.first().is_some_and(|c| c["holds"] == true),
        "exhaustive leximin optimum is rejected by the leximin checker",
    );
    Ok(Outcome::new(
        "leximin on W, e.g. {c3 | c2,c4 | c1}, is PROP1-E and PO in V",
        format!(
            "leximin on W gives {:?}; it and {:?} are leximin in W, PROP1-E and PO in V: {}",
            a.assignment(),
            quoted.assignment(),
            ok
        ),
        ok,
        log,
    ))
}

fn example2() -> Result<Outcome> {
    let label = "example2-propxe";
    let inst = Builtin::Example2Propxe.instance()?;
    let a = alloc(&[0, 0, 0, 0, 0, 1]);
    let half = Notion::AlphaMms(q("1/2"));
    let mut log = Log::default();
    let propx = log.check(label, &inst, Space::V, Notion::PropxE, &a)?;
    let in_v = log.check(label, &inst, Space::V, half.clone(), &a)?;
    let in_w = log.check(label, &inst, Space::W, half, &a)?;
    let p = MmsProfile::compute(&inst)?;
    log.require(verify_shift_identity(&inst, &p), "shares violate mu_V = mu_W + v'(M)");
    Ok(Outcome::new(
        "{c1..c5 | c6} is PROPX-E in V, not 2-MMS in V, 2-MMS in W",
        format!(
            "PROPX-E in V {}, 2-MMS in V {}, 2-MMS in W {}",
            yes(propx),
            yes(in_v),
            yes(in_w)
        ),
        propx && !in_v && in_w,
        log,
    )
    .with(json!({
        "mu_w": p.agents.iter().map(|a| &a.mu_w).collect::<Vec<_>>(),
        "mu_v": p.agents.iter().map(|a| &a.mu_v).collect::<Vec<_>>(),
    })))
}

fn profile_claim(b: Builtin, mu_w: &str, mu_v: &str, shift: &str, log: Log) -> Result<Outcome> {
    let inst = b.instance()?;
    let p = MmsProfile::compute(&inst)?;
    let mut log = log;
    log.require(verify_shift_identity(&inst, &p), "shares violate mu_V = mu_W + v'(M)");
    let got_w: Vec<Rational> = p.agents.iter().map(|a| a.mu_w.clone()).collect();
    let got_v: Vec<Rational> = p.agents.iter().map(|a| a.mu_v.clone()).collect();
    let got_s: Vec<Rational> = p.agents.iter().map(|a| a.shift.clone()).collect();
    let n = inst.n();
    let matches = got_w == vec![q(mu_w); n] && got_v == vec![q(mu_v); n] && got_s == vec![q(shift); n];
    Ok(Outcome::new(
        format!("every agent: mu_W = {mu_w}, mu_V = {mu_v}, v'(M) = {shift}"),
        format!("mu_W = {}, mu_V = {}, v'(M) = {}", show(&got_w), show(&got_v), show(&got_s)),
        matches,
        log,
    )
    .with(json!({ "profile": p })))
}

fn mms_correlated_goods() -> Result<Outcome> {
    profile_claim(Builtin::PropProofGoods, "1", "8/5", "3/5", Log::default())
}

fn mms_example5() -> Result<Outcome> {
    profile_claim(Builtin::ExampleChoresNeg, "-42", "-219", "-177", Log::default())
}

fn counterexample(b: Builtin, a: &[usize], alpha: &str, what: &str) -> Result<Outcome> {
    let label = b.name();
    let inst = b.instance()?;
    let a = alloc(a);
    let notion = Notion::AlphaMms(q(alpha));
    let mut log = Log::default();
    let in_v = log.check(label, &inst, Space::V, notion.clone(), &a)?;
    let in_w = log.check(label, &inst, Space::W, notion, &a)?;
    Ok(Outcome::new(
        format!("{what} is alpha-MMS({alpha}) in V but not in W"),
        format!("in V {}, in W {}", yes(in_v), yes(in_w)),
        in_v && !in_w,
        log,
    ))
}

fn counterex_goods() -> Result<Outcome> {
    counterexample(Builtin::PropProofGoods, &[0, 1, 1, 1, 1, 1], "1/2", "{g1 | g2..g6}")
}

fn counterex_chores() -> Result<Outcome> {
    counterexample(Builtin::ExampleChoresNeg, &[0, 0, 0], "3/4", "{c1,c2,c3 | -}")
}

fn vg_profile() -> Result<Outcome> {
    profile_claim(Builtin::vg_goods(), "4055000", "1/10", "-40549999/10", Log::default())
}

fn vc_profile() -> Result<Outcome> {
    profile_claim(Builtin::vc_chores(), "-4055000", "-1/10", "40549999/10", Log::default())
}

fn vg_integral() -> Result<Outcome> {
    let inst = Builtin::vg_goods().instance()?;
    let t = transform(&inst);
    let bad: Vec<_> = (0..inst.n())
        .flat_map(|i| (0..inst.m()).map(move |k| (i, k)))
        .filter(|&(i, k)| !t.one_d.w(i, k).is_integer())
        .map(|(i, k)| json!({ "agent": i, "item": inst.item_ids()[k], "w": t.one_d.w(i, k) }))
        .collect();
    Ok(Outcome::new(
        "every w entry of the transformed goods table is an integer",
        format!("{} non-integral entries", bad.len()),
        bad.is_empty(),
        Log::default(),
    )
    .with(json!({ "non_integral": bad })))
}

fn variant_notion(v: AlphaVariant, a: Rational) -> Notion {
    match v {
        AlphaVariant::Alpha => Notion::AlphaMms(a),
        AlphaVariant::Shifted => Notion::ShiftedAlphaMms(a),
        AlphaVariant::I => Notion::AlphaMmsI(a),
        AlphaVariant::II => Notion::AlphaMmsII(a),
    }
}

/// Best alpha in `V`; a rational optimum's witness is re-checked.
fn best_in_v(b: &Builtin, variant: AlphaVariant, log: &mut Log) -> Result<(BestAlpha, MmsProfile)> {
    let inst = b.instance()?;
    let p = MmsProfile::compute(&inst)?;
    let view = p.view(Space::V)?;
    let best = best_alpha(&Valuation::v(&inst), &view, variant)?;
    let at = match &best.alpha_star {
        AlphaStar::Exact(r) => Some(r.clone()),
        AlphaStar::All => Some(Rational::one()),
        _ => None,
    };
    if let (Some(r), Some(w)) = (at, &best.witness) {
        let ok = log.check(b.name(), &inst, Space::V, variant_notion(variant, r), w)?;
        log.require(ok, "best-alpha witness fails at alpha_star");
    }
    Ok((best, p))
}

fn lemma2() -> Result<Outcome> {
    let b = Builtin::vg_goods();
    let mut log = Log::default();
    let (best, p) = best_in_v(&b, AlphaVariant::Alpha, &mut log)?;
    // Independent route: with every share positive, alpha = 0 needs all
    // utilities nonnegative, so NONE holds iff the max-min utility is negative.
    let inst = b.instance()?;
    let mew = exhaustive_opt(&inst, Objective::Mew, Space::V)?;
    let ok = log.check(b.name(), &inst, Space::V, Notion::Mew, &mew)?;
    log.require(ok, "egalitarian optimum is rejected by the checker");
    let min = (0..inst.n())
        .map(|i| utility_2d(&inst, i, &mew))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or_else(Rational::zero);
    let positive = p.agents.iter().all(|a| a.mu_v.is_positive());
    let none = best.alpha_star == AlphaStar::None;
    log.require(
        !positive || none == min.is_negative(),
        format!("best alpha {} but max-min utility {min}", best.alpha_star),
    );
    Ok(Outcome::new(
        "no alpha-MMS allocation for any alpha in [0, 1]: alpha_star = NONE",
        format!("alpha_star = {}, max-min utility = {min}", best.alpha_star),
        none,
        log,
    )
    .with(json!({ "best": best, "max_min_allocation": mew, "max_min_utility": min })))
}

fn lemma3() -> Result<Outcome> {
    let b = Builtin::vc_chores();
    let mut log = Log::default();
    let (best, _) = best_in_v(&b, AlphaVariant::Alpha, &mut log)?;
    let bound = q("1/10");
    let below = match &best.alpha_star {
        AlphaStar::None => true,
        AlphaStar::All => false,
        AlphaStar::Exact(r) => *r < bound,
        AlphaStar::Irrational(s) => s.cmp_rational(&bound).is_lt(),
    };
    // Independent route: no allocation at all meets the bound itself.
    let inst = b.instance()?;
    let checker = Checker::new(&inst, Space::V)?;
    let at_bound = search_predicate_with(&checker, &[Notion::AlphaMms(bound.clone())])?;
    log.require(
        at_bound.is_none() == below,
        format!("best alpha {} but search at 1/10 found {at_bound:?}", best.alpha_star),
    );
    Ok(Outcome::new(
        "no allocation is 1/alpha-MMS once alpha >= 10^3 e1 = 1/10: alpha_star < 1/10",
        format!("alpha_star = {}", best.alpha_star),
        below,
        log,
    )
    .with(json!({ "best": best })))
}

fn vg_appendix_profile() -> Result<Outcome> {
    let b = Builtin::vg_appendix();
    let inst = b.instance()?;
    let p = MmsProfile::compute(&inst)?;
    let mut log = Log::default();
    log.require(verify_shift_identity(&inst, &p), "shares violate mu_V = mu_W + v'(M)");
    let n = inst.n();
    let pick = |f: fn(&crate::mms::AgentShare) -> Option<Rational>| -> Vec<Option<Rational>> {
        p.agents.iter().map(f).collect()
    };
    let mu_w = pick(|a| Some(a.mu_w.clone()));
    let mu_v = pick(|a| Some(a.mu_v.clone()));
    let plus = pick(|a| a.mu_plus.clone());
    let minus = pick(|a| a.mu_minus.clone());
    let shift = pick(|a| Some(a.shift.clone()));
    let want = |s: &str| vec![Some(q(s)); n];
    let matches = mu_w == want("40550000")
        && mu_v == want("1/10")
        && plus == want("9/10")
        && minus == want("-4/5")
        && shift == want("-405499999/10");
    let fmt = |xs: &[Option<Rational>]| {
        let v: Vec<String> = xs
            .iter()
            .map(|x| x.as_ref().map_or("-".into(), Rational::to_string))
            .collect();
        format!("({})", v.join(", "))
    };
    Ok(Outcome::new(
        "every agent: mu_W = 40550000, mu_V = 1/10, mu+ = 9/10, mu- = -4/5, v'(M) = -405499999/10",
        format!(
            "mu_W = {}, mu_V = {}, mu+ = {}, mu- = {}, v'(M) = {}",
            fmt(&mu_w),
            fmt(&mu_v),
            fmt(&plus),
            fmt(&minus),
            fmt(&shift)
        ),
        matches,
        log,
    )
    .with(json!({ "profile": p })))
}

fn split_share_none(variant: AlphaVariant) -> Result<Outcome> {
    let b = Builtin::vg_appendix();
    let mut log = Log::default();
    let (best, _) = best_in_v(&b, variant, &mut log)?;
    Ok(Outcome::new(
        format!("no {} allocation for any admissible alpha: alpha_star = NONE", variant.name()),
        format!("alpha_star = {}", best.alpha_star),
        best.alpha_star == AlphaStar::None,
        log,
    )
    .with(json!({ "best": best })))
}

fn lemma6() -> Result<Outcome> {
    split_share_none(AlphaVariant::I)
}

fn lemma7() -> Result<Outcome> {
    split_share_none(AlphaVariant::II)
}

fn eq_nonretention() -> Result<Outcome> {
    let label = "eq-counterex";
    let inst = Builtin::EqCounterex.instance()?;
    let a = alloc(&[0, 0, 1, 1]);
    let b = alloc(&[1, 1, 0, 0]);
    let mut log = Log::default();
    let a_w = log.check(label, &inst, Space::W, Notion::Eq, &a)?;
    let a_v = log.check(label, &inst, Space::V, Notion::Eq1, &a)?;
    let b_v = log.check(label, &inst, Space::V, Notion::Eq, &b)?;
    let b_w = log.check(label, &inst, Space::W, Notion::Eq1, &b)?;
    Ok(Outcome::new(
        "{g1,g2 | g3,g4} is EQ in W and not EQ1 in V; {g3,g4 | g1,g2} is EQ in V and not EQ1 in W",
        format!(
            "first: EQ in W {}, EQ1 in V {}; second: EQ in V {}, EQ1 in W {}",
            yes(a_w),
            yes(a_v),
            yes(b_v),
            yes(b_w)
        ),
        a_w && !a_v && b_v && !b_w,
        log,
    ))
}

fn mew_nonretention() -> Result<Outcome> {
    let label = "mew-counterex";
    let inst = Builtin::MewCounterex.instance()?;
    let mut log = Log::default();
    let mut found = Vec::new();
    for space in [Space::V, Space::W] {
        let a = exhaustive_opt(&inst, Objective::Mew, space)?;
        let ok = log.check(label, &inst, space, Notion::Mew, &a)?;
        log.require(ok, format!("egalitarian optimum in {space} is rejected by the checker"));
        // the optimum must be unique for the claim to be about "the" MEW allocation
        let others: Vec<Allocation> = enumerate_allocations(inst.n(), inst.m())?
            .filter(|x| *x != a)
            .filter(|x| crate::checkers::check(&inst, space, &Notion::Mew, x).is_ok_and(|v| v.holds))
            .collect();
        found.push((a, others));
    }
    let unique = found.iter().all(|(_, o)| o.is_empty());
    let matches = unique && found[0].0.assignment() == [0, 0] && found[1].0.assignment() == [0, 1];
    Ok(Outcome::new(
        "MEW(V) = {g1,g2 | -}, MEW(W) = {g1 | g2}",
        format!(
            "MEW(V) = {:?}, MEW(W) = {:?}, unique: {unique}",
            found[0].0.assignment(),
            found[1].0.assignment()
        ),
        matches,
        log,
    ))
}

/// Shared corpus for the property claims: up to 3 agents and 6 items.
pub fn property_corpus() -> Vec<Instance2D> {
    corpus(2024, 1000, 3, 6)
}

pub const RETAINED: [Notion; 11] = [
    Notion::Ef,
    Notion::Ef1,
    Notion::Efx,
    Notion::PropE,
    Notion::Prop1E,
    Notion::PropxE,
    Notion::Mms,
    Notion::Mms1,
    Notion::Mmsx,
    Notion::Po,
    Notion::Muw,
];

/// Maps over the corpus, in parallel when the feature is on; order is kept.
fn par_map<T: Send>(corpus: &[Instance2D], f: impl Fn(&Instance2D) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        corpus.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    corpus.iter().map(f).collect()
}

/// Allocations where a retained notion differs between `V` and `W`.
pub fn retention_disagreements(inst: &Instance2D) -> Result<Vec<(Allocation, Notion)>> {
    let p = MmsProfile::compute(inst)?;
    let v = Checker::new(inst, Space::V)?.with_profile(&p)?;
    let w = Checker::new(inst, Space::W)?.with_profile(&p)?;
    let mut out = Vec::new();
    for a in enumerate_allocations(inst.n(), inst.m())? {
        for notion in &RETAINED {
            if v.check(notion, &a)?.holds != w.check(notion, &a)?.holds {
                out.push((a.clone(), notion.clone()));
            }
        }
    }
    Ok(out)
}

fn transform_retention() -> Result<Outcome> {
    let corpus = property_corpus();
    let per = par_map(&corpus, retention_disagreements);
    let mut bad = Vec::new();
    for (t, found) in per.into_iter().enumerate() {
        for (a, notion) in found? {
            bad.push(json!({ "instance": t, "allocation": a, "notion": notion.to_string() }));
        }
    }
    Ok(Outcome::new(
        "EF, EF1, EFX, PROP-E, PROP1-E, PROPX-E, MMS, MMS1, MMSX, PO, MUW agree in V and W",
        format!("{} disagreements over {} instances", bad.len(), corpus.len()),
        bad.is_empty(),
        Log::default(),
    )
    .with(json!({ "disagreements": bad })))
}

/// Counterexamples in the corpus to `premise => conclusion` (or `<=>`).
fn implication(premise: Notion, conclusion: Notion, both_ways: bool) -> Result<Vec<serde_json::Value>> {
    let corpus = property_corpus();
    let per: Vec<Result<Vec<Allocation>>> = par_map(&corpus, |inst| {
        let c = Checker::new(inst, Space::V)?;
        let mut found = Vec::new();
        for a in enumerate_allocations(inst.n(), inst.m())? {
            let p = c.check(&premise, &a)?.holds;
            let q = c.check(&conclusion, &a)?.holds;
            if (p && !q) || (both_ways && q && !p) {
                found.push(a);
            }
        }
        Ok(found)
    });
    let mut bad = Vec::new();
    for (t, found) in per.into_iter().enumerate() {
        bad.extend(found?.into_iter().map(|a| json!({ "instance": t, "allocation": a })));
    }
    Ok(bad)
}

fn ef_implies_prop_e() -> Result<Outcome> {
    let bad = implication(Notion::Ef, Notion::PropE, false)?;
    Ok(Outcome::new(
        "EF implies PROP-E",
        format!("{} counterexamples", bad.len()),
        bad.is_empty(),
        Log::default(),
    )
    .with(json!({ "counterexamples": bad })))
}

fn prop_e_avg_share() -> Result<Outcome> {
    let bad = implication(Notion::PropE, Notion::AvgShare, true)?;
    Ok(Outcome::new(
        "PROP-E and Average Share coincide in 2-D",
        format!("{} counterexamples", bad.len()),
        bad.is_empty(),
        Log::default(),
    )
    .with(json!({ "counterexamples": bad })))
}

fn fullext_gap() -> Result<Outcome> {
    let mut log = Log::default();
    let mut found = Vec::new();
    for dir in [GapDirection::PropENotAvg, GapDirection::AvgNotPropE] {
        let Some(g) = search_fullext_gap(4, 7, 100_000, Some(dir))? else {
            continue;
        };
        let prop = check_full(&g.instance, &Notion::PropE, &g.allocation)?.holds;
        let avg = check_full(&g.instance, &Notion::AvgShare, &g.allocation)?.holds;
        log.require(
            (prop, avg) == (dir == GapDirection::PropENotAvg, dir == GapDirection::AvgNotPropE),
            format!("{dir:?} instance does not re-check"),
        );
        found.push(g);
    }
    Ok(Outcome::new(
        "with full externalities neither of PROP-E and Average Share implies the other",
        format!("separating instances found: {}", found.len()),
        found.len() == 2,
        log,
    )
    .with(json!({ "instances": found })))
}

fn shift_identity() -> Result<Outcome> {
    let corpus = corpus(77, 200, 3, 6);
    let bad: Vec<usize> = corpus
        .iter()
        .enumerate()
        .filter(|(_, inst)| MmsProfile::compute(inst).map_or(true, |p| !verify_shift_identity(inst, &p)))
        .map(|(t, _)| t)
        .collect();
    Ok(Outcome::new(
        "mu_V = mu_W + v'(M) for every agent",
        format!("{} violations over {} instances", bad.len(), corpus.len()),
        bad.is_empty(),
        Log::default(),
    )
    .with(json!({ "violations": bad })))
}

fn lemma1() -> Result<Outcome> {
    let mut bad = Vec::new();
    for kind in [Kind::Goods, Kind::Chores] {
        for (t, inst) in corpus_of(kind, 5, 100, 3, 6).iter().enumerate() {
            let r = verify_lemma1(&transform(inst), kind);
            if !(r.normalized && r.monotone && r.sign_ok) {
                bad.push(json!({ "kind": kind, "instance": t, "report": r }));
            }
        }
    }
    Ok(Outcome::new(
        "for goods (chores) W is normalized, monotone (anti-monotone), nonnegative (nonpositive)",
        format!("{} violations", bad.len()),
        bad.is_empty(),
        Log::default(),
    )
    .with(json!({ "violations": bad })))
}

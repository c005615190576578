//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use extfair::allocators::{
    bag_fill_half_mms, double_round_robin, envy_cycle, exhaustive_opt, round_robin, Objective,
};
use extfair::checkers::{check_full, search_fullext_gap, GapDirection};
use extfair::enumerate::enumerate_allocations;
use extfair::gen::{corpus, corpus_of};
use extfair::mms::{MmsProfile, ShareView};
use extfair::model::classify;
use extfair::paperlab::{property_corpus, recheck, retention_disagreements, run_suite, Builtin, ClaimResult, Status};
use extfair::transform::transform;
use extfair::{check, Allocation, Checker, Instance2D, Kind, Notion, Rational, Space};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

/// Utility of agent `i` for holding exactly the items in `held`, by direct summation.
fn direct_utility(inst: &Instance2D, space: Space, i: usize, held: impl Fn(usize) -> bool) -> Rational {
    let mut total = Rational::zero();
    for k in 0..inst.m() {
        total = match (space, held(k)) {
            (Space::W, true) => total + inst.v(i, k) - inst.vprime(i, k),
            (Space::W, false) => total,
            (_, true) => total + inst.v(i, k),
            (_, false) => total + inst.vprime(i, k),
        };
    }
    total
}

/// Maximin share by trying every partition, independent of the library's scan.
fn brute_mu(inst: &Instance2D, space: Space, i: usize) -> Rational {
    enumerate_allocations(inst.n(), inst.m())
        .unwrap()
        .map(|a| {
            (0..inst.n())
                .map(|j| direct_utility(inst, space, i, |k| a.owner(k) == j))
                .min()
                .unwrap()
        })
        .max()
        .unwrap()
}

struct Suite {
    results: BTreeMap<String, ClaimResult>,
    elapsed: Duration,
}

impl Suite {
    fn get(&self, id: &str) -> Result<&ClaimResult, String> {
        self.results.get(id).ok_or_else(|| format!("claim {id} missing"))
    }

    fn pass(&self, id: &str) -> Result<&ClaimResult, String> {
        let r = self.get(id)?;
        ensure(
            r.status == Status::Pass,
            format!("{id} is {}: {} (expected {})", r.status, r.computed, r.expected),
        )?;
        let differ = recheck(r).map_err(e)?;
        ensure(differ.is_empty(), format!("{id}: {} recorded verdicts do not re-check", differ.len()))?;
        Ok(r)
    }
}

fn c1_transform() -> Outcome {
    let t = transform(&Builtin::Intro2Goods.instance().map_err(e)?);
    let row = &t.one_d.rows()[0];
    ensure(*row == [q("7"), q("105")], format!("w = {row:?}"))?;
    Ok("w = (7, 105)".into())
}

fn c2_example1(s: &Suite) -> Outcome {
    let inst = Builtin::Example1Leximin.instance().map_err(e)?;
    let v = exhaustive_opt(&inst, Objective::Leximin, Space::V).map_err(e)?;
    ensure(v.assignment() == [2, 2, 2, 2], format!("leximin on V = {:?}", v.assignment()))?;
    ensure(!check(&inst, Space::V, &Notion::Prop1E, &v).map_err(e)?.holds, "V optimum is PROP1-E")?;
    let w = exhaustive_opt(&inst, Objective::Leximin, Space::W).map_err(e)?;
    for n in [Notion::Prop1E, Notion::Po] {
        ensure(check(&inst, Space::V, &n, &w).map_err(e)?.holds, format!("W optimum fails {n} in V"))?;
    }
    s.pass("EXAMPLE1_LEXIMIN_V")?;
    s.pass("EXAMPLE1_LEXIMIN_W")?;
    Ok(format!("V: {:?} not PROP1-E; W: {:?} PROP1-E and PO in V", v.assignment(), w.assignment()))
}

fn c3_example2(s: &Suite) -> Outcome {
    let inst = Builtin::Example2Propxe.instance().map_err(e)?;
    let a = Allocation::new(vec![0, 0, 0, 0, 0, 1]);
    let half = Notion::AlphaMms(q("1/2"));
    ensure(check(&inst, Space::V, &Notion::PropxE, &a).map_err(e)?.holds, "PROPX-E fails in V")?;
    ensure(!check(&inst, Space::V, &half, &a).map_err(e)?.holds, "2-MMS holds in V")?;
    ensure(check(&inst, Space::W, &half, &a).map_err(e)?.holds, "2-MMS fails in W")?;
    for i in 0..inst.n() {
        let (w, v) = (brute_mu(&inst, Space::W, i), brute_mu(&inst, Space::V, i));
        ensure(w == q("-49") && v == q("-6"), format!("agent {i}: mu_W = {w}, mu_V = {v}"))?;
    }
    s.pass("EXAMPLE2")?;
    Ok("PROPX-E in V, 2-MMS fails in V and holds in W; mu_W = -49, mu_V = -6".into())
}

fn c4_shares(s: &Suite) -> Outcome {
    for (b, mu_w, mu_v) in [(Builtin::PropProofGoods, "1", "8/5"), (Builtin::ExampleChoresNeg, "-42", "-219")] {
        let inst = b.instance().map_err(e)?;
        let p = MmsProfile::compute(&inst).map_err(e)?;
        for (i, a) in p.agents.iter().enumerate() {
            ensure(
                a.mu_w == q(mu_w) && a.mu_v == q(mu_v),
                format!("{} agent {i}: mu_W = {}, mu_V = {}", b.name(), a.mu_w, a.mu_v),
            )?;
        }
    }
    let instances = corpus(77, 200, 3, 6);
    for (t, inst) in instances.iter().enumerate() {
        let p = MmsProfile::compute(inst).map_err(e)?;
        for i in 0..inst.n() {
            let (w, v) = (brute_mu(inst, Space::W, i), brute_mu(inst, Space::V, i));
            ensure(
                v == w.clone() + inst.vprime_total(i) && p.agents[i].mu_w == w && p.agents[i].mu_v == v,
                format!("instance {t} agent {i}"),
            )?;
        }
    }
    s.pass("SHIFT_IDENTITY")?;
    Ok(format!("quoted shares match; mu_V = mu_W + v'(M) on {} instances", instances.len()))
}

fn c5_counterexamples(s: &Suite) -> Outcome {
    for (b, a, alpha) in [
        (Builtin::PropProofGoods, vec![0, 1, 1, 1, 1, 1], "1/2"),
        (Builtin::ExampleChoresNeg, vec![0, 0, 0], "3/4"),
    ] {
        let inst = b.instance().map_err(e)?;
        let a = Allocation::new(a);
        let n = Notion::AlphaMms(q(alpha));
        ensure(check(&inst, Space::V, &n, &a).map_err(e)?.holds, format!("{}: fails in V", b.name()))?;
        ensure(!check(&inst, Space::W, &n, &a).map_err(e)?.holds, format!("{}: holds in W", b.name()))?;
    }
    s.pass("COUNTEREX_GOODS")?;
    s.pass("COUNTEREX_CHORES")?;
    Ok("1/2-MMS goods and 4/3-MMS chores hold in V, fail in W".into())
}

fn c6_lemma2(s: &Suite) -> Outcome {
    let r = s.pass("LEMMA2")?;
    let min: Rational = serde_json::from_value(r.evidence["details"]["max_min_utility"].clone()).map_err(e)?;
    ensure(min.is_negative(), format!("max-min utility {min}"))?;
    let p = MmsProfile::compute(&Builtin::vg_goods().instance().map_err(e)?).map_err(e)?;
    ensure(p.agents.iter().all(|a| a.mu_v == q("1/10")), "shares are not 1/10")?;
    ensure(s.elapsed < Duration::from_secs(60), format!("suite took {:?}", s.elapsed))?;
    Ok(format!("alpha_star = NONE; max-min utility {min}, every mu = 1/10"))
}

fn c7_lemma3(s: &Suite) -> Outcome {
    let r = s.pass("LEMMA3")?;
    ensure(r.computed == "alpha_star = 1/11", format!("regression value changed: {}", r.computed))?;
    Ok("alpha_star = 1/11 < 1/10".into())
}

fn c8_split_shares(s: &Suite) -> Outcome {
    let mut notes = Vec::new();
    for id in ["VG_APPENDIX_PROFILE", "LEMMA6", "LEMMA7"] {
        let r = s.get(id)?;
        match r.status {
            Status::Pass => {
                s.pass(id)?;
            }
            Status::Discrepancy => {
                // the suite must carry what it computed, never pass silently
                ensure(r.computed != r.expected && !r.evidence["details"].is_null(), format!("{id}: bare discrepancy"))?;
                ensure(recheck(r).map_err(e)?.is_empty(), format!("{id}: evidence does not re-check"))?;
                notes.push(format!("{id} DISCREPANCY ({})", r.computed));
            }
            Status::Fail => return Err(format!("{id} FAIL: {}", r.computed)),
        }
    }
    if notes.is_empty() {
        Ok("profile and NONE results match".into())
    } else {
        Ok(format!("reported with evidence: {}", notes.join("; ")))
    }
}

fn c9_retention(s: &Suite) -> Outcome {
    let instances = property_corpus();
    let mixed = instances.iter().filter(|i| classify(i).kind == Kind::Mixed).count();
    ensure(instances.len() == 1000 && mixed > 0, format!("{} instances, {mixed} mixed", instances.len()))?;
    for (t, inst) in instances.iter().enumerate() {
        let bad = retention_disagreements(inst).map_err(e)?;
        ensure(bad.is_empty(), format!("instance {t}: {} disagreements, first {:?}", bad.len(), bad.first()))?;
    }
    s.pass("TRANSFORM_RETENTION")?;
    Ok(format!("0 disagreements over {} instances ({mixed} mixed)", instances.len()))
}

fn c10_nonretention(s: &Suite) -> Outcome {
    s.pass("EQ_NONRETENTION")?;
    let inst = Builtin::MewCounterex.instance().map_err(e)?;
    let v = exhaustive_opt(&inst, Objective::Mew, Space::V).map_err(e)?;
    let w = exhaustive_opt(&inst, Objective::Mew, Space::W).map_err(e)?;
    ensure(v.assignment() == [0, 0] && w.assignment() == [0, 1], format!("MEW {v:?} / {w:?}"))?;
    s.pass("MEW_NONRETENTION")?;
    Ok("EQ in W but not EQ1 in V; MEW(V) = {g1,g2 | -}, MEW(W) = {g1 | g2}".into())
}

fn c11_implications(s: &Suite) -> Outcome {
    let mut count = 0usize;
    for (t, inst) in property_corpus().iter().enumerate() {
        let c = Checker::new(inst, Space::V).map_err(e)?;
        for a in enumerate_allocations(inst.n(), inst.m()).map_err(e)? {
            let ef = c.check(&Notion::Ef, &a).map_err(e)?.holds;
            let prop = c.check(&Notion::PropE, &a).map_err(e)?.holds;
            let avg = c.check(&Notion::AvgShare, &a).map_err(e)?.holds;
            ensure(!ef || prop, format!("instance {t} {a:?}: EF without PROP-E"))?;
            ensure(prop == avg, format!("instance {t} {a:?}: PROP-E {prop}, Average Share {avg}"))?;
            count += 1;
        }
    }
    for dir in [GapDirection::PropENotAvg, GapDirection::AvgNotPropE] {
        let g = search_fullext_gap(4, 7, 100_000, Some(dir))
            .map_err(e)?
            .ok_or_else(|| format!("no {dir:?} instance found"))?;
        let prop = check_full(&g.instance, &Notion::PropE, &g.allocation).map_err(e)?.holds;
        let avg = check_full(&g.instance, &Notion::AvgShare, &g.allocation).map_err(e)?.holds;
        ensure(prop != avg && prop == (dir == GapDirection::PropENotAvg), format!("{dir:?} does not re-check"))?;
    }
    s.pass("EF_IMPLIES_PROP_E")?;
    s.pass("PROP_E_AVG_SHARE")?;
    s.pass("FULLEXT_GAP")?;
    Ok(format!("0 counterexamples over {count} allocations; both full-externality gaps found"))
}

fn holds_both(inst: &Instance2D, notions: &[(Space, Notion)], a: &Allocation) -> Result<(), String> {
    for (space, n) in notions {
        ensure(check(inst, *space, n, a).map_err(e)?.holds, format!("{n} fails in {space} for {a:?}"))?;
    }
    Ok(())
}

fn c12_allocators() -> Outcome {
    let half = q("1/2");
    let ef1 = [(Space::V, Notion::Ef1), (Space::W, Notion::Ef1)];
    let mut runs = 0usize;
    for (kind, seed) in [(Kind::Goods, 12), (Kind::Chores, 13), (Kind::Mixed, 14)] {
        for inst in corpus_of(kind, seed, 200, 3, 6) {
            let one_d = transform(&inst).one_d;
            let mut outputs = vec![double_round_robin(&one_d)];
            if one_d.kind() != Kind::Mixed {
                outputs.push(round_robin(&one_d, None).map_err(e)?);
            }
            if one_d.kind() == Kind::Goods {
                outputs.push(envy_cycle(&one_d).map_err(e)?);
                let mnw = exhaustive_opt(&inst, Objective::MnwOnW, Space::W).map_err(e)?;
                holds_both(&inst, &[(Space::V, Notion::Po), (Space::W, Notion::Po)], &mnw)?;
                outputs.push(mnw);
                let mu = ShareView::of_one_d(&one_d).map_err(e)?.mu;
                let bag = bag_fill_half_mms(&one_d, &mu).map_err(e)?;
                holds_both(
                    &inst,
                    &[
                        (Space::W, Notion::AlphaMms(half.clone())),
                        (Space::V, Notion::ShiftedAlphaMms(half.clone())),
                    ],
                    &bag,
                )?;
                runs += 1;
            }
            for a in &outputs {
                holds_both(&inst, &ef1, a)?;
            }
            runs += outputs.len();
        }
    }
    Ok(format!("{runs} algorithm runs on 600 instances, 0 failures"))
}

fn main() {
    let start = Instant::now();
    let results = run_suite(None);
    let suite = Suite {
        elapsed: start.elapsed(),
        results: results.into_iter().map(|r| (r.id.clone(), r)).collect(),
    };
    let criteria: [Criterion; 12] = [
        ("transform example", Box::new(c1_transform)),
        ("example 1 leximin", Box::new(|| c2_example1(&suite))),
        ("example 2 PROPX-E vs 2-MMS", Box::new(|| c3_example2(&suite))),
        ("MMS shares and shift identity", Box::new(|| c4_shares(&suite))),
        ("correlated counterexamples", Box::new(|| c5_counterexamples(&suite))),
        ("goods non-existence", Box::new(|| c6_lemma2(&suite))),
        ("chores threshold", Box::new(|| c7_lemma3(&suite))),
        ("split-share variants", Box::new(|| c8_split_shares(&suite))),
        ("transform retention", Box::new(|| c9_retention(&suite))),
        ("non-retention fixtures", Box::new(|| c10_nonretention(&suite))),
        ("implications", Box::new(|| c11_implications(&suite))),
        ("allocator guarantees", Box::new(c12_allocators)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{:.1?}]", k + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{:.1?}]", k + 1, t.elapsed());
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! `extfair` command line.
//!
//! Exit codes: 0 success or every notion holds, 1 some notion fails,
//! 2 usage or input error, 3 enumeration guard exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use extfair::allocators::{
    bag_fill_half_mms, double_round_robin, envy_cycle, exhaustive_opt, round_robin,
    search_predicate_with, Algorithm,
};
use extfair::checkers::{check_full, NOTION_NAMES};
use extfair::gen::{generate, GenSpec};
use extfair::io::{read_allocation, read_instance, write_allocation, write_instance, InstanceDoc};
use extfair::mms::{best_alpha, mms_decompose, AlphaVariant, MmsProfile, ShareView};
use extfair::model::{Externality, Kind};
use extfair::paperlab::{run_suite, unknown_claims, Builtin, Status, CLAIM_IDS};
use extfair::transform::transform;
use extfair::{Allocation, Checker, Error, FullInstance, Instance1D, Instance2D, Notion, Rational, Space, Valuation};

#[derive(Parser)]
#[command(name = "extfair", version, about = "Exact fair division with 2-D externalities")]
struct Cli {
    /// Worker threads for exhaustive scans; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    V,
    W,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum MmsSpace {
    V,
    W,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Goods,
    Chores,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtArg {
    Correlated,
    Inverse,
    Positive,
    Negative,
    Mixed,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check notions on an allocation.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
        /// Comma-separated notion names, e.g. ef1,prop-e,alpha-mms.
        #[arg(long, value_delimiter = ',', required = true)]
        notions: Vec<String>,
        #[arg(long, value_enum, ignore_case = true, default_value = "v")]
        space: SpaceArg,
        /// For alpha-parameterized notions, as P/Q.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Write the 1-D instance `w = v - v'` with the shift `v'(M)`.
    Transform {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximin shares, optionally split and with the best alpha.
    Mms {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, ignore_case = true, default_value = "both")]
        space: MmsSpace,
        #[arg(long)]
        decompose: bool,
        /// alpha-mms, shifted-alpha-mms, alpha-mms-i or alpha-mms-ii.
        #[arg(long)]
        best_alpha: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run an allocation algorithm and check what it promises.
    Allocate {
        #[arg(long)]
        instance: PathBuf,
        /// round-robin, double-round-robin, envy-cycle, bag-fill-half-mms,
        /// exhaustive:<muw|mew|leximin|mnw>, search:<notion,...>.
        #[arg(long)]
        algorithm: String,
        /// Picking order for round-robin, comma-separated agent indices.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Space for exhaustive and search algorithms.
        #[arg(long, value_enum, ignore_case = true, default_value = "w")]
        space: SpaceArg,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        items: usize,
        #[arg(long, value_enum, ignore_case = true)]
        kind: KindArg,
        #[arg(long, value_enum, ignore_case = true)]
        externality: ExtArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_den: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in instance, e.g. vg-goods or vc-chores(1/20000,-1/1000).
    Builtin {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the claims suite.
    PaperSuite {
        /// Comma-separated claim ids.
        #[arg(long, value_delimiter = ',')]
        filter: Option<Vec<String>>,
        /// Also write the full results here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: Option<&Path>, text: &str) -> Res<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn parse_alpha(alpha: Option<&str>) -> Res<Option<Rational>> {
    alpha
        .map(|a| a.parse::<Rational>().map_err(|e| Failure::Lib(e.into())))
        .transpose()
}

fn parse_notions(names: &[String], alpha: Option<&Rational>) -> Res<Vec<Notion>> {
    names
        .iter()
        .map(|n| {
            Notion::parse(n, alpha)
                .map_err(|e| usage(format!("{e}; known: {}", NOTION_NAMES.join(", "))))
        })
        .collect()
}

fn two_d(doc: InstanceDoc) -> Res<Instance2D> {
    match doc {
        InstanceDoc::TwoD(inst) => Ok(inst),
        _ => Err(usage("this command needs a 2-D instance document")),
    }
}

fn space_of(s: SpaceArg) -> Space {
    match s {
        SpaceArg::V => Space::V,
        SpaceArg::W => Space::W,
        SpaceArg::Full => Space::Full,
    }
}

fn verdict_line(notion: &Notion, holds: bool, witness: &Value) -> String {
    let mut line = format!("{notion}: {}", if holds { "holds" } else { "fails" });
    if !witness.is_null() {
        line.push_str(&format!("  witness {witness}"));
    }
    line
}

fn cmd_check(
    instance: &Path,
    allocation: &Path,
    notions: &[String],
    space: SpaceArg,
    alpha: Option<&str>,
    as_json: bool,
) -> Res<bool> {
    let alpha = parse_alpha(alpha)?;
    let notions = parse_notions(notions, alpha.as_ref())?;
    let doc = read_instance(instance)?;
    let alloc = read_allocation(allocation)?;
    let space = space_of(space);
    let verdicts = match (doc, space) {
        (InstanceDoc::Full(full), Space::Full) => check_each_full(&full, &notions, &alloc)?,
        (InstanceDoc::TwoD(inst), Space::Full) => check_each_full(&FullInstance::embed(&inst), &notions, &alloc)?,
        (InstanceDoc::TwoD(inst), s) => Checker::new(&inst, s)?.check_all(&notions, &alloc)?,
        (InstanceDoc::OneD { instance, .. }, Space::W) => Checker::one_d(&instance).check_all(&notions, &alloc)?,
        (InstanceDoc::OneD { .. }, s) => return Err(usage(format!("a 1-D instance has no space {s}"))),
        (InstanceDoc::Full(_), s) => return Err(usage(format!("a full instance is checked in FULL, not {s}"))),
    };
    let all = verdicts.iter().all(|v| v.holds);
    if as_json {
        let rows: Vec<Value> = notions
            .iter()
            .zip(&verdicts)
            .map(|(n, v)| json!({ "notion": n.to_string(), "holds": v.holds, "witness": v.witness }))
            .collect();
        print_json(&json!({
            "schema": "extfair/check-report/1",
            "space": space,
            "allocation": alloc,
            "verdicts": rows,
        }));
    } else {
        for (n, v) in notions.iter().zip(&verdicts) {
            println!("{}", verdict_line(n, v.holds, &json!(v.witness)));
        }
    }
    Ok(all)
}

fn check_each_full(full: &FullInstance, notions: &[Notion], alloc: &Allocation) -> Res<Vec<extfair::Verdict>> {
    Ok(notions
        .iter()
        .map(|n| check_full(full, n, alloc))
        .collect::<extfair::Result<_>>()?)
}

fn cmd_transform(instance: &Path, out: Option<&Path>) -> Res<()> {
    let inst = two_d(read_instance(instance)?)?;
    let t = transform(&inst);
    emit(
        out,
        &write_instance(&InstanceDoc::OneD {
            instance: t.one_d,
            shift: Some(t.shift),
        }),
    )
}

fn cmd_mms(instance: &Path, space: MmsSpace, decompose: bool, variant: Option<&str>, as_json: bool) -> Res<()> {
    let variant: Option<AlphaVariant> = variant.map(str::parse).transpose()?;
    let mut report = serde_json::Map::new();
    let mut lines = Vec::new();
    match read_instance(instance)? {
        InstanceDoc::TwoD(inst) => {
            let p = MmsProfile::compute(&inst)?;
            let mut agents = Vec::new();
            for (i, a) in p.agents.iter().enumerate() {
                let mut row = serde_json::Map::new();
                let mut line = format!("agent {i}:");
                if !matches!(space, MmsSpace::V) {
                    row.insert("mu_w".into(), json!(a.mu_w));
                    line.push_str(&format!(" mu_W = {}", a.mu_w));
                }
                if !matches!(space, MmsSpace::W) {
                    row.insert("mu_v".into(), json!(a.mu_v));
                    row.insert("shift".into(), json!(a.shift));
                    row.insert("partition".into(), json!(a.partition));
                    line.push_str(&format!(" mu_V = {} v'(M) = {}", a.mu_v, a.shift));
                }
                if decompose {
                    let (plus, minus) = mms_decompose(&inst, i, &p)?;
                    line.push_str(&format!(" mu+ = {plus} mu- = {minus}"));
                    row.insert("mu_plus".into(), json!(plus));
                    row.insert("mu_minus".into(), json!(minus));
                }
                agents.push(Value::Object(row));
                lines.push(line);
            }
            report.insert("kind".into(), json!(p.kind));
            report.insert("agents".into(), json!(agents));
            if let Some(v) = variant {
                let s = if matches!(space, MmsSpace::W) { Space::W } else { Space::V };
                let val = Valuation::of(&inst, s)?;
                let best = best_alpha(&val, &p.view(s)?, v)?;
                lines.push(format!("best {} in {s}: {}", v.name(), best.alpha_star));
                if let Some(w) = &best.witness {
                    lines.push(format!("  attained by {:?}", w.assignment()));
                }
                report.insert("best_alpha".into(), json!({ "variant": v.name(), "space": s, "result": best }));
            }
        }
        InstanceDoc::OneD { instance: inst, .. } => {
            if decompose || matches!(space, MmsSpace::V) {
                return Err(usage("a 1-D instance has only W shares"));
            }
            let view = ShareView::of_one_d(&inst)?;
            for (i, mu) in view.mu.iter().enumerate() {
                lines.push(format!("agent {i}: mu_W = {mu}"));
            }
            report.insert("agents".into(), json!(view.mu.iter().map(|m| json!({ "mu_w": m })).collect::<Vec<_>>()));
            if let Some(v) = variant {
                let best = best_alpha(&Valuation::w(&inst), &view, v)?;
                lines.push(format!("best {} in W: {}", v.name(), best.alpha_star));
                report.insert("best_alpha".into(), json!({ "variant": v.name(), "space": Space::W, "result": best }));
            }
        }
        InstanceDoc::Full(_) => return Err(usage("shares are not defined for full instances")),
    }
    if as_json {
        report.insert("schema".into(), json!("extfair/mms-report/1"));
        print_json(&Value::Object(report));
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(())
}

/// Runs `algo`; the polynomial algorithms see the 1-D transform.
fn run_algorithm(
    algo: &Algorithm,
    inst: &Instance2D,
    one_d: &Instance1D,
    order: Option<&[usize]>,
    space: Space,
) -> Res<Option<Allocation>> {
    Ok(Some(match algo {
        Algorithm::RoundRobin => round_robin(one_d, order)?,
        Algorithm::DoubleRoundRobin => double_round_robin(one_d),
        Algorithm::EnvyCycle => envy_cycle(one_d)?,
        Algorithm::BagFillHalfMms => {
            let view = ShareView::of_one_d(one_d)?;
            bag_fill_half_mms(one_d, &view.mu)?
        }
        Algorithm::Exhaustive(obj) => exhaustive_opt(inst, *obj, space)?,
        Algorithm::PredicateSearch(ns) => return Ok(search_predicate_with(&Checker::new(inst, space)?, ns)?),
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_allocate(
    instance: &Path,
    algorithm: &str,
    order: Option<&[usize]>,
    space: SpaceArg,
    alpha: Option<&str>,
    out: Option<&Path>,
    as_json: bool,
) -> Res<bool> {
    let alpha = parse_alpha(alpha)?;
    let algo: Algorithm = match (algorithm.split_once(':'), alpha) {
        (Some((head, list)), Some(a)) if head.eq_ignore_ascii_case("search") => Algorithm::PredicateSearch(
            list.split(',')
                .filter(|x| !x.is_empty())
                .map(|n| Notion::parse(n, Some(&a)))
                .collect::<extfair::Result<_>>()?,
        ),
        _ => algorithm.parse()?,
    };
    if order.is_some() && algo != Algorithm::RoundRobin {
        return Err(usage("--order only applies to round-robin"));
    }
    let space = space_of(space);
    if space == Space::Full {
        return Err(usage("allocation algorithms run in V or W"));
    }
    let (inst, one_d) = match read_instance(instance)? {
        InstanceDoc::TwoD(inst) => {
            let one_d = transform(&inst).one_d;
            (inst, one_d)
        }
        InstanceDoc::OneD { instance, .. } => (Instance2D::from_one_d(&instance), instance),
        InstanceDoc::Full(_) => return Err(usage("allocation algorithms need a 2-D or 1-D instance")),
    };
    let Some(alloc) = run_algorithm(&algo, &inst, &one_d, order, space)? else {
        if as_json {
            print_json(&json!({ "schema": "extfair/allocate-report/1", "allocation": null, "verdicts": [] }));
        } else {
            println!("no allocation satisfies the requested notions");
        }
        return Ok(false);
    };
    if let Some(p) = out {
        emit(Some(p), &write_allocation(&alloc))?;
    }
    let mut rows = Vec::new();
    let mut all = true;
    for s in [Space::V, Space::W] {
        let checker = Checker::new(&inst, s)?;
        for n in algo.advertised(s) {
            let v = checker.check(&n, &alloc)?;
            all &= v.holds;
            rows.push(json!({ "space": s, "notion": n.to_string(), "holds": v.holds, "witness": v.witness }));
        }
    }
    if as_json {
        print_json(&json!({
            "schema": "extfair/allocate-report/1",
            "allocation": alloc,
            "verdicts": rows,
        }));
    } else {
        println!("assignment: {:?}", alloc.assignment());
        for (i, b) in alloc.bundles(inst.n()).iter().enumerate() {
            let ids: Vec<&str> = b.iter().map(|&k| inst.item_ids()[k].as_str()).collect();
            println!("agent {i}: {{{}}}", ids.join(", "));
        }
        for r in &rows {
            let n: Notion = r["notion"].as_str().expect("notion").parse()?;
            println!("[{}] {}", r["space"].as_str().unwrap_or("?"), verdict_line(&n, r["holds"] == true, &r["witness"]));
        }
    }
    Ok(all)
}

fn cmd_gen(
    agents: usize,
    items: usize,
    kind: KindArg,
    ext: ExtArg,
    seed: u64,
    max_den: u64,
    out: Option<&Path>,
) -> Res<()> {
    let kind = match kind {
        KindArg::Goods => Kind::Goods,
        KindArg::Chores => Kind::Chores,
        KindArg::Mixed => Kind::Mixed,
    };
    let externality = match (ext, kind) {
        (ExtArg::Positive, _) => Externality::Positive,
        (ExtArg::Negative, _) => Externality::Negative,
        (ExtArg::Mixed, _) => Externality::Mixed,
        (ExtArg::Correlated, Kind::Goods) | (ExtArg::Inverse, Kind::Chores) => Externality::Positive,
        (ExtArg::Correlated, Kind::Chores) | (ExtArg::Inverse, Kind::Goods) => Externality::Negative,
        (_, Kind::Mixed) => {
            return Err(usage("correlated and inverse externalities need --kind goods or chores"));
        }
    };
    if max_den == 0 {
        return Err(usage("--max-den must be positive"));
    }
    let inst = generate(&GenSpec::new(agents, items, kind, externality).max_den(max_den), seed)?;
    emit(out, &write_instance(&InstanceDoc::TwoD(inst)))
}

fn cmd_builtin(name: &str, out: Option<&Path>) -> Res<()> {
    let b: Builtin = name.parse()?;
    emit(out, &write_instance(&InstanceDoc::TwoD(b.instance()?)))
}

fn cmd_paper_suite(filter: Option<&[String]>, json_out: Option<&Path>) -> Res<bool> {
    if let Some(f) = filter {
        let unknown = unknown_claims(f);
        if !unknown.is_empty() {
            return Err(usage(format!(
                "unknown claim id(s) {}; known: {}",
                unknown.join(", "),
                CLAIM_IDS.join(", ")
            )));
        }
    }
    let results = run_suite(filter);
    for r in &results {
        println!("{:<11} {:<21} {}", r.status.to_string(), r.id, r.computed);
        if r.status != Status::Pass {
            println!("{:<33} expected: {}", "", r.expected);
        }
        if r.status == Status::Discrepancy {
            eprintln!("warning: {} contradicts the expected outcome", r.id);
        }
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    println!(
        "{} claims: {} pass, {} discrepancy, {} fail",
        results.len(),
        count(Status::Pass),
        count(Status::Discrepancy),
        count(Status::Fail)
    );
    if let Some(p) = json_out {
        let text = serde_json::to_string_pretty(&json!({ "schema": "extfair/suite/1", "results": results }))
            .expect("results serialize");
        emit(Some(p), &(text + "\n"))?;
    }
    Ok(count(Status::Fail) == 0)
}

fn run(cli: Cli) -> Res<bool> {
    match cli.cmd {
        Cmd::Check {
            instance,
            allocation,
            notions,
            space,
            alpha,
            json,
        } => cmd_check(&instance, &allocation, &notions, space, alpha.as_deref(), json),
        Cmd::Transform { instance, out } => cmd_transform(&instance, out.as_deref()).map(|_| true),
        Cmd::Mms {
            instance,
            space,
            decompose,
            best_alpha,
            json,
        } => cmd_mms(&instance, space, decompose, best_alpha.as_deref(), json).map(|_| true),
        Cmd::Allocate {
            instance,
            algorithm,
            order,
            space,
            alpha,
            out,
            json,
        } => cmd_allocate(
            &instance,
            &algorithm,
            order.as_deref(),
            space,
            alpha.as_deref(),
            out.as_deref(),
            json,
        ),
        Cmd::Gen {
            agents,
            items,
            kind,
            externality,
            seed,
            max_den,
            out,
        } => cmd_gen(agents, items, kind, externality, seed, max_den, out.as_deref()).map(|_| true),
        Cmd::Builtin { name, out } => cmd_builtin(&name, out.as_deref()).map(|_| true),
        Cmd::PaperSuite { filter, json } => cmd_paper_suite(filter.as_deref(), json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e @ Error::TooLarge { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

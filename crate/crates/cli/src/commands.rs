//! Subcommand implementations.

use std::fs;
use std::path::Path;
use std::time::Instant;

use bellcomm::catalog;
use bellcomm::classical::{
    bidirectional_onebit_bound, cbit_bound, local_bound, onebit_bound, BoundKind, BoundResult, Budget,
};
use bellcomm::heuristics::{seesaw_local, seesaw_onebit, SearchConfig, SeesawOutcome};
use bellcomm::model::{BellFunctional, Direction, Repr};
use bellcomm::platonic::{
    e7_vectors, onebit_signsearch_lower, onebit_upper_sqrt2, plato_quantum_value, sign_local_bound, sqrt2_local_below,
    two_direction_upper, VectorConfiguration,
};
use bellcomm::quantum::{
    cglmp_optimize_state, cglmp_strategy, chsh_quantum, flatten_terms, magic_quantum, product_value, CglmpStrategy,
};
use num_rational::Ratio;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::cache::{functional_hash, vectors_hash, Cache, CacheKey};
use crate::manifest::{self, CglmpCut, Job, Quantity, Relation, Sender};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

/// Failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_ERROR, message: format!("{}: {e}", path.display()) }
    }
}

impl From<bellcomm::Error> for CliError {
    fn from(e: bellcomm::Error) -> Self {
        let code = match e {
            bellcomm::Error::InvalidArgument(_) | bellcomm::Error::InvalidScenario(_) => EXIT_USAGE,
            _ => EXIT_ERROR,
        };
        Self { code, message: e.to_string() }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub enum Output {
    Report(Report),
    /// Bare text, printed as is in every format.
    Plain(String),
}

pub struct Done {
    pub output: Output,
    pub code: i32,
}

impl Done {
    fn ok(report: Report) -> Self {
        Self { output: Output::Report(report), code: EXIT_OK }
    }
}

pub struct Ctx {
    pub cache: Cache,
}

pub fn run(ctx: &Ctx, command: Command) -> Result<Done> {
    match command {
        Command::Build(a) => build(a),
        Command::Local(a) => local(ctx, a),
        Command::Onebit(a) => onebit(ctx, a),
        Command::Cbit(a) => cbit(ctx, a),
        Command::Quantum(a) => quantum(a.family),
        Command::Plato(a) => plato(ctx, a.action),
        Command::Heuristic(a) => heuristic(ctx, a),
        Command::Reproduce(a) => reproduce(ctx, a),
    }
}

// ---------------------------------------------------------------------------
// helpers

fn ratio_text(r: Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn budget(node_budget: Option<u64>) -> Budget {
    node_budget.map_or_else(Budget::unlimited, Budget::nodes)
}

fn kind_label(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::Exact => "exact",
        BoundKind::Lower => "lower",
        BoundKind::Upper => "upper",
    }
}

fn sender_of(d: DirectionArg) -> Sender {
    match d {
        DirectionArg::Ab => Sender::Ab,
        DirectionArg::Ba => Sender::Ba,
        DirectionArg::Bi => Sender::Bi,
    }
}

fn sender_label(s: Sender) -> &'static str {
    match s {
        Sender::Ab => "ab",
        Sender::Ba => "ba",
        Sender::Bi => "bi",
    }
}

fn load_functional(name: &str) -> Result<BellFunctional> {
    Ok(catalog::build(name)?)
}

/// Looks `key` up in the cache, computing and storing the value on a miss.
fn cached<T: Serialize + DeserializeOwned>(
    ctx: &Ctx,
    content: Option<String>,
    method: &str,
    node_budget: Option<u64>,
    compute: impl FnOnce() -> Result<T>,
) -> Result<(T, bool)> {
    let key = content.map(|c| CacheKey::new(c, method, node_budget));
    if let Some(hit) = key.as_ref().and_then(|k| ctx.cache.load::<T>(k)) {
        return Ok((hit, true));
    }
    let value = compute()?;
    if let Some(k) = &key {
        ctx.cache.store(k, &value);
    }
    Ok((value, false))
}

fn bound_fields(report: &mut Report, r: &BoundResult, cached: bool) {
    report.set("value", ratio_text(r.user_value()));
    report.set("value_f64", r.as_f64());
    report.set("kind", kind_label(r.kind));
    report.set("method", r.method.clone());
    report.set("nodes", r.nodes);
    report.set("elapsed_s", r.elapsed);
    report.set("certificate", serde_json::to_value(&r.certificate).expect("certificates serialize"));
    report.set("cached", cached);
}

fn bound_done(report: Report, r: &BoundResult) -> Done {
    Done { output: Output::Report(report), code: if r.is_exact() { EXIT_OK } else { EXIT_BUDGET } }
}

/// Larger of the two directional results; exact only if both are.
fn both_directions(
    f: &BellFunctional,
    one: impl Fn(Direction) -> bellcomm::Result<BoundResult>,
) -> bellcomm::Result<BoundResult> {
    let forward = one(Direction::AliceToBob)?;
    if f.is_party_symmetric() {
        return Ok(forward);
    }
    let backward = one(Direction::BobToAlice)?;
    let exact = forward.is_exact() && backward.is_exact();
    let (elapsed, nodes) = (forward.elapsed + backward.elapsed, forward.nodes + backward.nodes);
    let mut best = if backward.value > forward.value { backward } else { forward };
    best.kind = if exact { BoundKind::Exact } else { BoundKind::Lower };
    best.elapsed = elapsed;
    best.nodes = nodes;
    Ok(best)
}

fn exact_local(ctx: &Ctx, f: &BellFunctional, node_budget: Option<u64>) -> Result<(BoundResult, bool)> {
    cached(ctx, functional_hash(f), "local", node_budget, || Ok(local_bound(f, budget(node_budget))?))
}

fn exact_cbit(
    ctx: &Ctx,
    f: &BellFunctional,
    bits: u32,
    sender: Sender,
    node_budget: Option<u64>,
) -> Result<(BoundResult, bool)> {
    let method = if bits == 1 {
        format!("onebit-{}", sender_label(sender))
    } else {
        format!("cbit{bits}-{}", sender_label(sender))
    };
    cached(ctx, functional_hash(f), &method, node_budget, || {
        let b = budget(node_budget);
        let one = |d| if bits == 1 { onebit_bound(f, d, b) } else { cbit_bound(f, bits, d, b) };
        Ok(match sender {
            Sender::Ab => one(Direction::AliceToBob)?,
            Sender::Ba => one(Direction::BobToAlice)?,
            Sender::Bi if bits == 1 => bidirectional_onebit_bound(f, b)?,
            Sender::Bi => both_directions(f, one)?,
        })
    })
}

fn seesaw(ctx: &Ctx, f: &BellFunctional, one_bit: bool, cfg: &SearchConfig) -> Result<(SeesawOutcome, bool)> {
    let method = format!(
        "seesaw-{} seed={} restarts={} sweeps={} direction={}",
        if one_bit { "onebit" } else { "local" },
        cfg.seed,
        cfg.restarts,
        cfg.max_sweeps,
        cfg.direction.label()
    );
    cached(ctx, functional_hash(f), &method, None, || {
        Ok(if one_bit { seesaw_onebit(f, cfg)? } else { seesaw_local(f, cfg)? })
    })
}

fn seesaw_fields(report: &mut Report, out: &SeesawOutcome, cached: bool) {
    bound_fields(report, &out.result, cached);
    report.set("best_restart", out.best_restart);
    let histogram: serde_json::Map<String, Value> = out
        .histogram
        .iter()
        .rev()
        .map(|(v, n)| (ratio_text(Ratio::new(*v, out.result.denominator)), json!(n)))
        .collect();
    report.set("histogram", Value::Object(histogram));
}

// ---------------------------------------------------------------------------
// build, local, onebit, cbit

fn representation(f: &BellFunctional) -> &'static str {
    match f.repr() {
        Repr::Dense(_) => "dense",
        Repr::Product(..) => "product",
        Repr::Truncated { .. } => "truncated product",
    }
}

fn build(a: BuildArgs) -> Result<Done> {
    let f = load_functional(&a.functional)?;
    if a.print_scenario {
        return Ok(Done { output: Output::Plain(f.scenario().to_string()), code: EXIT_OK });
    }
    let s = f.scenario();
    let mut report = Report::new("build")
        .field("functional", a.functional.clone())
        .field("scenario", s.to_string())
        .field("representation", representation(&f))
        .field("inputs_a", f.input_labels_a())
        .field("inputs_b", f.input_labels_b())
        .field("denominator", f.denominator())
        .field("algebraic_bound", ratio_text(Ratio::new(f.algebraic_bound(), f.denominator())))
        .field("probability_dimension", u64::try_from(s.probability_dimension()).map_or(Value::Null, Value::from))
        .field("content_hash", functional_hash(&f).map_or(Value::Null, Value::from));
    if a.functional.eq_ignore_ascii_case("platoe7") {
        let form = catalog::plato_e7().to_probability()?;
        report.set("correlation_offset", ratio_text(form.offset));
    }
    if let Some(path) = &a.export {
        fs::write(path, f.to_json()?).map_err(|e| CliError::io(path, e))?;
        report.set("exported", path.display().to_string());
    }
    Ok(Done::ok(report))
}

fn local(ctx: &Ctx, a: BoundArgs) -> Result<Done> {
    let f = load_functional(&a.functional)?;
    let (r, hit) = exact_local(ctx, &f, a.node_budget)?;
    let mut report = Report::new("local").field("functional", a.functional).field("scenario", f.scenario().to_string());
    bound_fields(&mut report, &r, hit);
    Ok(bound_done(report, &r))
}

fn onebit(ctx: &Ctx, a: OnebitArgs) -> Result<Done> {
    let f = load_functional(&a.bound.functional)?;
    let (r, hit) = exact_cbit(ctx, &f, 1, sender_of(a.direction), a.bound.node_budget)?;
    let mut report = Report::new("onebit")
        .field("functional", a.bound.functional)
        .field("scenario", f.scenario().to_string())
        .field("direction", a.direction.label());
    bound_fields(&mut report, &r, hit);
    Ok(bound_done(report, &r))
}

fn cbit(ctx: &Ctx, a: CbitArgs) -> Result<Done> {
    if a.bits == 0 {
        return Err(CliError::usage("--bits must be at least 1"));
    }
    let f = load_functional(&a.bound.functional)?;
    let (r, hit) = exact_cbit(ctx, &f, a.bits, sender_of(a.direction), a.bound.node_budget)?;
    let mut report = Report::new("cbit")
        .field("functional", a.bound.functional)
        .field("scenario", f.scenario().to_string())
        .field("bits", a.bits)
        .field("direction", a.direction.label());
    bound_fields(&mut report, &r, hit);
    Ok(bound_done(report, &r))
}

// ---------------------------------------------------------------------------
// quantum

fn strategy_json(json_text: String) -> Result<Value> {
    serde_json::from_str(&json_text).map_err(|e| CliError { code: EXIT_ERROR, message: e.to_string() })
}

/// Fourier strategy for CGLMP_d and its value on `copies` copies (optionally truncated).
fn cglmp_value(d: usize, copies: usize, cut: Option<CglmpCut>, uniform: bool) -> Result<(f64, CglmpStrategy)> {
    let schmidt = if uniform { vec![1.0 / (d as f64).sqrt(); d] } else { cglmp_optimize_state(d)?.0 };
    let strategy = cglmp_strategy(d, &schmidt)?;
    if copies == 1 && cut.is_none() {
        return Ok((strategy.value(), strategy));
    }
    let (keep_x, keep_y): (Option<&[usize]>, Option<&[usize]>) = match cut {
        None => (None, None),
        Some(_) if copies != 2 => return Err(CliError::usage("truncations are defined for two copies")),
        Some(CglmpCut::Symmetric) => (Some(&catalog::CGLMP2S_KEEP), Some(&catalog::CGLMP2S_KEEP)),
        Some(CglmpCut::Asymmetric) => (Some(&catalog::CGLMP2S_KEEP), Some(&catalog::CGLMP2A_KEEP_Y)),
    };
    let value = product_value(&flatten_terms(&strategy.terms), 2, 2, copies, keep_x, keep_y)?;
    Ok((value, strategy))
}

fn quantum_fields(report: &mut Report, name: &str) -> Result<()> {
    let q = catalog::quantum_value(name)?;
    report.set("functional", name);
    report.set("value", q.value);
    report.set("optimal", q.optimal);
    report.set("strategy", q.strategy);
    Ok(())
}

fn quantum(family: QuantumFamily) -> Result<Done> {
    let mut report = Report::new("quantum");
    match family {
        QuantumFamily::Chsh { copies, emit_strategy } => {
            if copies == 0 {
                return Err(CliError::usage("--copies must be at least 1"));
            }
            let name = if copies == 1 { "chsh".to_string() } else { format!("chsh{copies}") };
            quantum_fields(&mut report, &name)?;
            report.set("closed_form", (2.0 + 2f64.sqrt()).powi(copies as i32));
            if emit_strategy {
                let (qs, _) = chsh_quantum()?;
                report.set("strategy_document", strategy_json(qs.tensor_power(copies)?.to_json()?)?);
            }
        }
        QuantumFamily::Magic { copies, truncation, emit_strategy } => {
            let name = match (copies, truncation) {
                (0, _) => return Err(CliError::usage("--copies must be at least 1")),
                (2, Some(Truncation::S)) => "magic2s".to_string(),
                (2, Some(Truncation::A)) => "magic2a".to_string(),
                (_, Some(_)) => return Err(CliError::usage("truncations are defined for two copies")),
                (1, None) => "magic".to_string(),
                (n, None) => format!("magic{n}"),
            };
            quantum_fields(&mut report, &name)?;
            if emit_strategy {
                let (qs, _) = magic_quantum()?;
                let qs = qs.tensor_power(copies)?;
                let qs = match truncation {
                    Some(Truncation::S) => qs.restrict(&catalog::MAGIC2S_KEEP, &catalog::MAGIC2S_KEEP)?,
                    Some(Truncation::A) => qs.restrict(&catalog::MAGIC2A_KEEP_X, &catalog::MAGIC2A_KEEP_Y)?,
                    None => qs,
                };
                report.set("strategy_document", strategy_json(qs.to_json()?)?);
            }
        }
        QuantumFamily::Cglmp { d, copies, truncation, uniform, report: what } => {
            if copies == 0 {
                return Err(CliError::usage("--copies must be at least 1"));
            }
            let cut = truncation.map(|t| match t {
                Truncation::S => CglmpCut::Symmetric,
                Truncation::A => CglmpCut::Asymmetric,
            });
            let start = Instant::now();
            let (value, strategy) = cglmp_value(d, copies, cut, uniform)?;
            report.set("d", d);
            report.set("copies", copies);
            report.set("truncation", cut.map_or(Value::Null, |c| serde_json::to_value(c).expect("serializes")));
            report.set("state", if uniform { "uniform" } else { "optimized" });
            match what {
                CglmpReport::Value => {
                    report.set("value", value);
                    report.set("single_copy_value", strategy.value());
                }
                CglmpReport::TMatrix => report.set("t_matrix", json!(strategy.terms)),
                CglmpReport::State => report.set("schmidt", json!(strategy.schmidt)),
            }
            report.set("elapsed_s", start.elapsed().as_secs_f64());
        }
        QuantumFamily::Functional { functional } => quantum_fields(&mut report, &functional)?,
    }
    Ok(Done::ok(report))
}

// ---------------------------------------------------------------------------
// plato

fn plato_local(ctx: &Ctx, v: &VectorConfiguration, node_budget: Option<u64>) -> Result<(BoundResult, bool)> {
    cached(ctx, Some(vectors_hash(v)), "sign-bb", node_budget, || Ok(sign_local_bound(v, budget(node_budget))?))
}

fn plato_lower(ctx: &Ctx, v: &VectorConfiguration, restarts: usize, seed: u64) -> Result<(SeesawOutcome, bool)> {
    if restarts == 0 {
        return Err(CliError::usage("--restarts must be at least 1"));
    }
    let method = format!("sign-seesaw seed={seed} restarts={restarts}");
    cached(ctx, Some(vectors_hash(v)), &method, None, || Ok(onebit_signsearch_lower(v, restarts, seed)))
}

fn plato(ctx: &Ctx, action: PlatoAction) -> Result<Done> {
    let v = e7_vectors();
    match action {
        PlatoAction::E7 { emit_vectors } => {
            let mut report = Report::new("plato e7")
                .field("vectors", v.len())
                .field("span_dim", v.dim())
                .field("ambient_dim", v.ambient_dim())
                .field("semi_orthogonal", v.is_semi_orthogonal())
                .field("frame_constant", ratio_text(Ratio::new(v.len() as i64, v.dim() as i64)))
                .field("quantum_value", ratio_text(plato_quantum_value(&v)))
                .field("content_hash", vectors_hash(&v));
            if emit_vectors {
                report.set("configuration", strategy_json(v.to_json()?)?);
            }
            Ok(Done::ok(report))
        }
        PlatoAction::Local { node_budget } => {
            let (r, hit) = plato_local(ctx, &v, node_budget)?;
            let mut report = Report::new("plato local").field("functional", "platoE7");
            bound_fields(&mut report, &r, hit);
            Ok(bound_done(report, &r))
        }
        PlatoAction::Onebit { restarts, seed, with_upper } => {
            let (out, hit) = plato_lower(ctx, &v, restarts, seed)?;
            let mut report = Report::new("plato onebit").field("functional", "platoE7");
            seesaw_fields(&mut report, &out, hit);
            report.set("quantum_value", ratio_text(plato_quantum_value(&v)));
            if with_upper {
                let (l, _) = plato_local(ctx, &v, None)?;
                let local = l.as_f64();
                let two_direction = two_direction_upper(&v, local, restarts, seed);
                report.set("local", ratio_text(l.user_value()));
                report.set("upper_sqrt2_local", onebit_upper_sqrt2(local));
                report.set("upper_two_direction", serde_json::to_value(&two_direction).expect("serializes"));
            }
            Ok(Done::ok(report))
        }
    }
}

// ---------------------------------------------------------------------------
// heuristic

fn heuristic(ctx: &Ctx, a: HeuristicArgs) -> Result<Done> {
    let f = load_functional(&a.functional)?;
    let direction = match a.direction {
        DirectionArg::Ab => Direction::AliceToBob,
        DirectionArg::Ba => Direction::BobToAlice,
        DirectionArg::Bi => return Err(CliError::usage("the see-saw needs a single direction (ab or ba)")),
    };
    let cfg = SearchConfig { seed: a.seed, restarts: a.restarts, max_sweeps: a.max_sweeps, direction };
    let one_bit = a.kind == HeuristicKind::Onebit;
    let (out, hit) = seesaw(ctx, &f, one_bit, &cfg)?;
    let mut report = Report::new(if one_bit { "heuristic onebit" } else { "heuristic local" })
        .field("functional", a.functional)
        .field("config", serde_json::to_value(cfg).expect("serializes"));
    seesaw_fields(&mut report, &out, hit);
    Ok(Done::ok(report))
}

// ---------------------------------------------------------------------------
// reproduce

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Pass,
    Fail,
    /// The computation stopped at its budget before settling the comparison.
    Incomplete,
    Error,
}

struct Measured {
    value: f64,
    text: String,
    kind: &'static str,
    cached: bool,
    /// Set when the comparison is decided exactly rather than from `value`.
    decided: Option<Status>,
}

impl Measured {
    fn bound(r: &BoundResult, cached: bool) -> Self {
        Self { value: r.as_f64(), text: ratio_text(r.user_value()), kind: kind_label(r.kind), cached, decided: None }
    }

    fn number(value: f64, kind: &'static str) -> Self {
        Self { value, text: format!("{value:.10}"), kind, cached: false, decided: None }
    }
}

fn measure(ctx: &Ctx, job: &Job, node_budget: Option<u64>) -> Result<Measured> {
    let seesaw_cfg = |restarts, seed| SearchConfig::new(seed, restarts);
    Ok(match &job.quantity {
        Quantity::Local => {
            let (r, hit) = exact_local(ctx, &load_functional(&job.functional)?, node_budget)?;
            Measured::bound(&r, hit)
        }
        Quantity::Onebit { sender } => {
            let (r, hit) = exact_cbit(ctx, &load_functional(&job.functional)?, 1, *sender, node_budget)?;
            Measured::bound(&r, hit)
        }
        Quantity::SeesawLocal { restarts, seed } => {
            let (out, hit) = seesaw(ctx, &load_functional(&job.functional)?, false, &seesaw_cfg(*restarts, *seed))?;
            Measured::bound(&out.result, hit)
        }
        Quantity::SeesawOnebit { restarts, seed } => {
            let (out, hit) = seesaw(ctx, &load_functional(&job.functional)?, true, &seesaw_cfg(*restarts, *seed))?;
            Measured::bound(&out.result, hit)
        }
        Quantity::Quantum => {
            let q = catalog::quantum_value(&job.functional)?;
            Measured::number(q.value, if q.optimal { "optimal" } else { "lower" })
        }
        Quantity::CglmpQuantum { d, copies, cut } => {
            Measured::number(cglmp_value(*d, *copies, *cut, false)?.0, "lower")
        }
        Quantity::ProbabilityDimension => {
            let dp = load_functional(&job.functional)?.scenario().probability_dimension();
            Measured { value: dp as f64, text: dp.to_string(), kind: "exact", cached: false, decided: None }
        }
        Quantity::PlatoLocal => {
            let (r, hit) = plato_local(ctx, &e7_vectors(), node_budget)?;
            Measured::bound(&r, hit)
        }
        Quantity::PlatoOnebitUpper => {
            let (r, hit) = plato_local(ctx, &e7_vectors(), node_budget)?;
            let upper = onebit_upper_sqrt2(r.as_f64());
            // √2·L < t is decided exactly from the rational L.
            let decided = if !r.is_exact() {
                Status::Incomplete
            } else if sqrt2_local_below(r.user_value(), job.expected.value as i64) {
                Status::Pass
            } else {
                Status::Fail
            };
            Measured { value: upper, text: format!("{upper:.10}"), kind: "upper", cached: hit, decided: Some(decided) }
        }
        Quantity::PlatoQuantum => {
            let form = catalog::plato_e7().to_probability()?;
            let q = catalog::quantum_value(&job.functional)?;
            Measured::number(q.value - ratio_f64(form.offset), "optimal")
        }
    })
}

fn judge(job: &Job, m: &Measured) -> Status {
    if let Some(status) = m.decided {
        return status;
    }
    let e = &job.expected;
    let slack = e.tolerance + 1e-12 * e.value.abs().max(1.0);
    let ok = match e.relation {
        Relation::Eq => (m.value - e.value).abs() <= slack,
        Relation::Ge => m.value >= e.value - slack,
        Relation::Lt => m.value < e.value,
    };
    match (ok, m.kind) {
        (true, _) => Status::Pass,
        // A budget-limited search that has not reached the target may still get there.
        (false, "lower") if job.source == manifest::Source::Exact && m.value < e.value => Status::Incomplete,
        (false, _) => Status::Fail,
    }
}

fn expected_text(job: &Job) -> String {
    let e = &job.expected;
    if e.tolerance > 0.0 {
        format!("{} {} ± {:e}", e.relation.symbol(), e.value, e.tolerance)
    } else {
        format!("{} {}", e.relation.symbol(), e.value)
    }
}

fn quantity_label(q: &Quantity) -> String {
    match serde_json::to_value(q).expect("serializes") {
        Value::Object(m) => m.get("kind").and_then(Value::as_str).unwrap_or_default().to_string(),
        _ => String::new(),
    }
}

fn write_csv(path: &Path, rows: &[Value]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    let columns = [
        "id",
        "functional",
        "quantity",
        "relation",
        "expected",
        "tolerance",
        "value",
        "kind",
        "status",
        "source",
        "seconds",
        "cached",
    ];
    w.write_record(columns).map_err(|e| CliError::io(path, e))?;
    for row in rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| match &row[*c] {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            })
            .collect();
        w.write_record(&cells).map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn reproduce(ctx: &Ctx, a: ReproduceArgs) -> Result<Done> {
    let mut jobs = manifest::jobs(a.table, a.max_n);
    if let Some(id) = &a.job {
        jobs.retain(|j| &j.id == id);
        if jobs.is_empty() {
            return Err(CliError::usage(format!("no job {id:?} in this table (see --list)")));
        }
    }
    let table_name = format!("{:?}", a.table).to_ascii_lowercase();
    if a.list {
        let rows = jobs
            .iter()
            .map(|j| {
                vec![
                    j.id.clone(),
                    quantity_label(&j.quantity),
                    expected_text(j),
                    format!("{:?}", j.source).to_ascii_lowercase(),
                ]
            })
            .collect();
        let report = Report::new("reproduce --list")
            .field("table", table_name)
            .field("jobs", serde_json::to_value(&jobs).expect("serializes"))
            .rows(vec!["id", "quantity", "expected", "source"], rows);
        return Ok(Done::ok(report));
    }

    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut counts = std::collections::BTreeMap::<&str, usize>::new();
    let mut worst = EXIT_OK;
    for job in &jobs {
        let start = Instant::now();
        let measured = measure(ctx, job, a.node_budget);
        let seconds = start.elapsed().as_secs_f64();
        let (status, m, error) = match measured {
            Ok(m) => (judge(job, &m), Some(m), None),
            Err(e) => (Status::Error, None, Some(e.message)),
        };
        let status_text = match status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Incomplete => "incomplete",
            Status::Error => "error",
        };
        *counts.entry(status_text).or_default() += 1;
        worst = worst.max(match status {
            Status::Pass => EXIT_OK,
            Status::Incomplete => EXIT_BUDGET,
            Status::Fail | Status::Error => EXIT_MISMATCH,
        });
        let value_text = m.as_ref().map_or_else(|| "-".to_string(), |m| m.text.clone());
        rows.push(vec![
            job.id.clone(),
            expected_text(job),
            value_text.clone(),
            m.as_ref().map_or("-", |m| m.kind).to_string(),
            status_text.to_string(),
            format!("{seconds:.1}s"),
        ]);
        results.push(json!({
            "id": job.id,
            "functional": job.functional,
            "quantity": quantity_label(&job.quantity),
            "parameters": job.quantity,
            "relation": job.expected.relation,
            "expected": job.expected.value,
            "tolerance": job.expected.tolerance,
            "value": m.as_ref().map(|m| m.value),
            "value_text": value_text,
            "kind": m.as_ref().map(|m| m.kind),
            "status": status,
            "source": job.source,
            "seconds": seconds,
            "cached": m.as_ref().map(|m| m.cached),
            "error": error,
        }));
        eprintln!("{} {status_text} ({seconds:.1}s)", job.id);
    }
    if let Some(path) = &a.csv {
        write_csv(path, &results)?;
    }
    let report = Report::new("reproduce")
        .field("table", table_name)
        .field("summary", json!(counts))
        .field("jobs", Value::Array(results))
        .rows(vec!["id", "expected", "value", "kind", "status", "time"], rows);
    Ok(Done { output: Output::Report(report), code: worst })
}

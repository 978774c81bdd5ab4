//! Suite runner and report emitter.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ast::*;
use super::eval::{Env, Value};
use super::parse::{simple_product, Catalog};
use crate::boundary::vector_ratio;
use crate::error::{Error, Result};
use crate::exactalg::{binomial_i64, PolyQ, Rat};
use crate::fock::{monomials_of_degree, vacuum_basis, vacuum_monomial, ModuleKind, State, VAElement};
use crate::vertex::commutator_table;
use crate::zhu::{default_max_weight, o_span_with, replay_certificate, OSpanBasis, SpanFamily};

/// Suites shipped in the standard catalog.
pub const SUITES: [&str; 8] = ["appendix", "relations", "eigen", "commutators", "zhu", "twisted", "boundary", "verma"];

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub rank: usize,
    /// cap on the O(V) weight bound; defaults to VOA_MAX_WEIGHT or the built-in cap
    pub max_weight: Option<i64>,
    /// concrete generators for the index variables, in declaration order
    pub assignment: Option<Vec<usize>>,
}

impl RunOptions {
    pub fn new(rank: usize) -> RunOptions {
        RunOptions { rank, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub rank: usize,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub seconds: f64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.skipped == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

type SpanCache = Mutex<HashMap<(usize, i64), Arc<OSpanBasis>>>;

/// One unit of work: a record at one loop point.
/// A record with a share of its loop points; the points of one task share mode caches.
struct Task<'a> {
    rec: &'a IdentityRecord,
    points: Vec<Vec<(String, i64)>>,
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn loop_points(loops: &[(String, i64, i64)]) -> Vec<Vec<(String, i64)>> {
    let mut points = vec![vec![]];
    for (v, lo, hi) in loops {
        points = points
            .into_iter()
            .flat_map(|p| {
                (*lo..=*hi).map(move |x| {
                    let mut q = p.clone();
                    q.push((v.clone(), x));
                    q
                })
            })
            .collect();
    }
    points
}

fn record_rank(rec: &IdentityRecord, opts: &RunOptions) -> usize {
    rec.options.rank.unwrap_or(opts.rank)
}

fn assignment(rec: &IdentityRecord, rank: usize, opts: &RunOptions) -> std::result::Result<HashMap<String, usize>, String> {
    let n = rec.index_vars.len();
    if rank < n {
        return Err(format!("rank {rank} is below the {n} index variables of this record"));
    }
    let values: Vec<usize> = match &opts.assignment {
        Some(a) if rec.options.rank.is_none() => a.iter().copied().take(n).collect(),
        _ => (1..=n).collect(),
    };
    if values.len() < n || values.iter().any(|&x| x == 0 || x > rank) {
        return Err(format!("index assignment {values:?} does not fit rank {rank}"));
    }
    let mut seen = values.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != values.len() {
        return Err(format!("index assignment {values:?} is not injective"));
    }
    Ok(rec.index_vars.iter().cloned().zip(values).collect())
}

fn describe_point(point: &[(String, i64)]) -> String {
    point.iter().map(|(v, x)| format!("{v}={x}")).collect::<Vec<_>>().join(", ")
}

/// Compares two values exactly or up to a nonzero rational factor.
fn compare(l: &Value, r: &Value, assoc: bool) -> std::result::Result<(), String> {
    let ok = match (l, r) {
        (Value::State(a), Value::State(b)) => {
            if assoc {
                a.associate_eq(b)
            } else {
                a == b
            }
        }
        (Value::State(a), Value::Scalar(z)) | (Value::Scalar(z), Value::State(a)) if z.is_zero() => a.is_zero(),
        (Value::Scalar(a), Value::Scalar(b)) => {
            if assoc {
                a.associate_eq(b)
            } else {
                a == b
            }
        }
        (Value::List(a), Value::List(b)) => {
            if assoc {
                vector_ratio(a, b).is_some() || (a.iter().all(|p| p.is_zero()) && b.iter().all(|p| p.is_zero()))
            } else {
                a == b
            }
        }
        _ => return Err(format!("cannot compare a {} with a {}", l.kind_name(), r.kind_name())),
    };
    if ok {
        return Ok(());
    }
    Err(match (l, r) {
        (Value::State(a), Value::State(b)) if !assoc => format!("lhs - rhs = {}", a.sub(b)),
        (Value::State(a), Value::Scalar(_)) => format!("lhs = {a}"),
        (Value::Scalar(a), Value::Scalar(b)) if !assoc => format!("lhs - rhs = {}", a - b),
        _ => format!("lhs = {l}; rhs = {r}"),
    })
}

fn is_zero_value(v: &Value) -> bool {
    match v {
        Value::Scalar(p) => p.is_zero(),
        Value::State(s) => s.is_zero(),
        Value::List(l) => l.iter().all(|p| p.is_zero()),
    }
}

/// Test states of a commutator record.
fn basis_states(kind: BasisKind, rank: usize, weight: i64) -> Vec<State> {
    let mut out = Vec::new();
    match kind {
        BasisKind::Vac | BasisKind::Exp => {
            let module = if kind == BasisKind::Vac { ModuleKind::Vacuum { rank } } else { ModuleKind::exp_symbolic(rank) };
            for w in 0..=weight {
                for m in vacuum_basis(rank, w) {
                    out.push(State::monomial(module.clone(), m, PolyQ::one()));
                }
            }
        }
        BasisKind::Tw => {
            let parts: Vec<i64> = (0..weight).map(|k| 2 * k + 1).collect();
            for d2 in 0..=2 * weight {
                for m in monomials_of_degree(rank, d2, &parts) {
                    out.push(State::monomial(ModuleKind::Twisted { rank }, m, PolyQ::one()));
                }
            }
        }
    }
    out
}

/// The field and mode of a single operator item.
fn single_mode(env: &mut Env, e: &Expr) -> Result<Option<(VAElement, i64)>> {
    let Expr::Chain(items, None) = e else { return Ok(None) };
    let [item] = items.as_slice() else { return Ok(None) };
    Ok(Some(match item {
        OpItem::Mode(head, n) => {
            let a = match env.eval(head, None)? {
                Value::State(s) => s,
                _ => return Ok(None),
            };
            (a, env.integer(n)?)
        }
        OpItem::Heis(i, n) => {
            let i = env.idx(i)?;
            (vacuum_monomial(env.rank, &[(i, 1)], Rat::from_integer(1.into())), env.integer(n)?)
        }
    }))
}

fn run_commutator(env: &mut Env, rec: &IdentityRecord) -> Result<std::result::Result<String, String>> {
    let rhs = rec.rhs.as_ref().expect("commutator records have two sides");
    let basis = rec.options.basis.unwrap_or(BasisKind::Vac);
    let weight = rec.options.weight.unwrap_or(4);
    let states = basis_states(basis, env.rank, weight);
    // the bracket as a sum of (a_k b)_{i+j-k} when both sides are single modes
    let borcherds = match &rec.lhs {
        Expr::Bracket(a, b) if basis != BasisKind::Tw => match (single_mode(env, a)?, single_mode(env, b)?) {
            (Some((a, i)), Some((b, j))) => Some((commutator_table(&a, &b)?, i, j)),
            _ => None,
        },
        _ => None,
    };
    for s in &states {
        let l = env.eval(&rec.lhs, Some(s))?;
        let r = env.eval(rhs, Some(s))?;
        let r = match r {
            Value::Scalar(c) => Value::State(s.scale(&c)),
            v => v,
        };
        if let Err(d) = compare(&l, &r, rec.assoc) {
            return Ok(Err(format!("on {s}: {d}")));
        }
        if let Some((table, i, j)) = &borcherds {
            let mut acc = State::zero(s.module().clone());
            for (k, ab) in table {
                let c = binomial_i64(*i, *k);
                if c == 0.into() {
                    continue;
                }
                let t = env.mode(ab, 2 * (i + j - k), s)?;
                acc.add_scaled(&t, &PolyQ::constant(Rat::from_integer(c)));
            }
            if let Err(d) = compare(&l, &Value::State(acc), false) {
                return Ok(Err(format!("on {s}: bracket differs from the commutator formula: {d}")));
            }
        }
    }
    Ok(Ok(format!("{} states up to weight {weight}", states.len())))
}

fn zhu_member(
    env: &mut Env,
    rec: &IdentityRecord,
    opts: &RunOptions,
    spans: &SpanCache,
) -> Result<Outcome> {
    let weight = rec.options.weight.unwrap_or(8);
    let cap = opts.max_weight.unwrap_or_else(|| default_max_weight(env.rank));
    if weight > cap {
        return Ok(Outcome::Skip(format!(
            "weight bound {weight} exceeds the cap {cap}; raise --weight-bound or VOA_MAX_WEIGHT"
        )));
    }
    let v = match env.eval(&rec.lhs, None)? {
        Value::State(s) => s,
        v => return Err(Error::Invalid(format!("zhuMember needs a state, found a {}", v.kind_name()))),
    };
    let key = (env.rank, weight);
    let cached = spans.lock().unwrap().get(&key).cloned();
    let span = match cached {
        Some(s) => s,
        None => {
            let s = Arc::new(o_span_with(env.rank, weight, None, cap, SpanFamily::default())?);
            spans.lock().unwrap().insert(key, s.clone());
            s
        }
    };
    let m = span.member(&v)?;
    if !m.member {
        return Ok(Outcome::Fail(format!("not in O(V) at weight bound {weight}")));
    }
    if replay_certificate(&m.certificate, env.rank) != v {
        return Ok(Outcome::Fail("certificate does not replay".into()));
    }
    Ok(Outcome::Pass(format!("certificate with {} generators at weight bound {weight}", m.certificate.len())))
}

fn run_task(task: &Task, catalog_defs: &HashMap<String, Expr>, opts: &RunOptions, spans: &SpanCache) -> Vec<Outcome> {
    let rank = record_rank(task.rec, opts);
    let indices = match assignment(task.rec, rank, opts) {
        Ok(a) => a,
        Err(reason) => return task.points.iter().map(|_| Outcome::Skip(reason.clone())).collect(),
    };
    let mut env = Env::new(rank, indices, catalog_defs);
    // a failing point settles the record, so the rest of the chunk is not run
    let mut out = Vec::new();
    for point in &task.points {
        let o = run_point(&mut env, task.rec, point, opts, spans);
        let stop = matches!(o, Outcome::Fail(_));
        out.push(o);
        if stop {
            break;
        }
    }
    out
}

fn run_point(env: &mut Env, rec: &IdentityRecord, point: &[(String, i64)], opts: &RunOptions, spans: &SpanCache) -> Outcome {
    for (v, x) in point {
        env.set_loop(v, *x);
    }
    let result = (|| -> Result<Outcome> {
        Ok(match rec.kind {
            Kind::Commutator => match run_commutator(env, rec)? {
                Ok(d) => Outcome::Pass(d),
                Err(d) => Outcome::Fail(d),
            },
            Kind::ZhuMember => zhu_member(env, rec, opts, spans)?,
            Kind::RelationZero => {
                let v = env.eval(&rec.lhs, None)?;
                if is_zero_value(&v) {
                    Outcome::Pass(String::new())
                } else {
                    Outcome::Fail(format!("nonzero: {v}"))
                }
            }
            _ => {
                let l = env.eval(&rec.lhs, None)?;
                let r = env.eval(rec.rhs.as_ref().expect("two-sided record"), None)?;
                if rec.axiom && is_zero_value(&l) {
                    return Ok(Outcome::Fail("axiom holds only trivially in this model".into()));
                }
                match compare(&l, &r, rec.assoc) {
                    Ok(()) => Outcome::Pass(String::new()),
                    Err(d) => Outcome::Fail(d),
                }
            }
        })
    })();
    result.unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")))
}

/// The "all other k give 0" products of every A[n] B group with a literal mode.
pub fn implicit_zero_records(records: &[&IdentityRecord], opts: &RunOptions) -> Vec<IdentityRecord> {
    let mut groups: BTreeMap<(String, String, String), (Vec<i64>, &IdentityRecord)> = BTreeMap::new();
    for rec in records.iter().filter(|r| r.kind == Kind::Product && r.options.loops.is_empty()) {
        let Some((a, Expr::Num(n), b)) = simple_product(&rec.lhs) else { continue };
        if !n.is_integer() {
            continue;
        }
        let key = (rec.suite.clone(), a.to_string(), b.to_string());
        let entry = groups.entry(key).or_insert_with(|| (Vec::new(), rec));
        entry.0.push(n.to_integer().try_into().unwrap_or(i64::MAX));
    }
    let defs = HashMap::new();
    let mut out = Vec::new();
    for (_, (listed, first)) in groups {
        let (a, _, b) = simple_product(&first.lhs).unwrap();
        let rank = record_rank(first, opts);
        let Ok(indices) = assignment(first, rank, opts) else { continue };
        let env = Env::new(rank, indices, &defs);
        let wt = |x: &ElemAtom| -> Option<i64> { Some(*env.element(x).ok()?.degrees2().iter().max()? / 2) };
        let (Some(wa), Some(wb)) = (wt(a), wt(b)) else { continue };
        for k in 0..wa + wb {
            if listed.contains(&k) {
                continue;
            }
            let lhs = Expr::Chain(
                vec![OpItem::Mode(Box::new(Expr::Elem(a.clone())), Box::new(Expr::Num(Rat::from_integer(k.into()))))],
                Some(Box::new(Expr::Elem(b.clone()))),
            );
            out.push(IdentityRecord {
                id: format!("app.zero.{}_{}_{}", a.slug(), k, b.slug()),
                lhs,
                rhs: Some(Expr::Num(Rat::from_integer(0.into()))),
                options: RecordOptions::default(),
                ..(*first).clone()
            });
        }
    }
    out
}

/// Runs one suite, or every suite for "all".
pub fn run_suite(catalog: &Catalog, suite: &str, opts: &RunOptions) -> Result<Report> {
    let start = Instant::now();
    let known = catalog.suites();
    if suite != "all" && !known.iter().any(|s| s == suite) {
        return Err(Error::Invalid(format!("unknown suite '{suite}'; known: all, {}", known.join(", "))));
    }
    let records: Vec<&IdentityRecord> = catalog.records().filter(|r| suite == "all" || r.suite == suite).collect();
    let implicit = implicit_zero_records(&records, opts);
    let all: Vec<&IdentityRecord> = records.into_iter().chain(implicit.iter()).collect();
    let defs = catalog.defs();
    let spans: SpanCache = Mutex::new(HashMap::new());
    let threads = rayon::current_num_threads().max(1);
    let tasks: Vec<Task> = all
        .iter()
        .flat_map(|rec| {
            let points = loop_points(&rec.options.loops);
            let size = points.len().div_ceil(threads).max(1);
            points.chunks(size).map(|c| Task { rec, points: c.to_vec() }).collect::<Vec<_>>()
        })
        .collect();
    let outcomes: Vec<Vec<Outcome>> = tasks.par_iter().map(|t| run_task(t, &defs, opts, &spans)).collect();

    let mut by_id: BTreeMap<String, CheckResult> = BTreeMap::new();
    let flat = tasks.iter().zip(outcomes).flat_map(|(t, o)| t.points.iter().map(move |p| (t.rec, p)).zip(o));
    for ((rec, point), outcome) in flat {
        let entry = by_id.entry(rec.id.clone()).or_insert_with(|| CheckResult {
            id: rec.id.clone(),
            status: Status::Pass,
            detail: String::new(),
        });
        let at = if point.is_empty() { String::new() } else { format!("at {}: ", describe_point(point)) };
        match outcome {
            Outcome::Pass(d) => {
                if entry.status == Status::Pass && entry.detail.is_empty() && !d.is_empty() && point.is_empty() {
                    entry.detail = d;
                }
            }
            Outcome::Fail(d) => {
                if entry.status != Status::Fail {
                    entry.status = Status::Fail;
                    entry.detail = format!("{at}{d}");
                }
            }
            Outcome::Skip(d) => {
                if entry.status == Status::Pass {
                    entry.status = Status::Skipped;
                    entry.detail = d;
                }
            }
        }
    }
    for rec in &all {
        let entry = by_id.get_mut(&rec.id).expect("every record produced a result");
        let points = loop_points(&rec.options.loops).len();
        if entry.status == Status::Pass && points > 1 {
            entry.detail = format!("{points} instances");
        }
        if rec.axiom {
            entry.detail = if entry.detail.is_empty() {
                "axiom: input assumption".into()
            } else {
                format!("axiom: input assumption; {}", entry.detail)
            };
        }
    }
    let checks: Vec<CheckResult> = by_id.into_values().collect();
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    Ok(Report {
        suite: suite.to_string(),
        rank: opts.rank,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "text" => Ok(ReportFormat::Text),
            _ => Err(format!("unknown format '{s}' (json or text)")),
        }
    }
}

pub fn render_report(r: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(r).expect("report serializes"),
        ReportFormat::Text => {
            let width = r.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
            let mut out = format!("suite {} at rank {}\n", r.suite, r.rank);
            for c in &r.checks {
                out.push_str(&format!("{:width$}  {:7}  {}\n", c.id, c.status.name(), c.detail));
            }
            out.push_str(&format!(
                "{} passed, {} failed, {} skipped in {:.2} s\n",
                r.passed, r.failed, r.skipped, r.seconds
            ));
            out
        }
    }
}

/// Writes the report to `path`, or to stdout when no path is given.
pub fn emit_report(r: &Report, format: ReportFormat, path: Option<&Path>) -> anyhow::Result<()> {
    let text = render_report(r, format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};

use voa::boundary::{derive_constraints, standard_relations, GenericVectorSpec};
use voa::catalog::{self, emit_report, eval_text, parse_catalog, parse_state, run_suite, ReportFormat, RunOptions, Value};
use voa::exactalg::{g_poly, PolyQ, UniPoly, Var};
use voa::fock::{Half, ModuleKind, State};
use voa::twisted::twisted_n_product;
use voa::vertex::{eval_commutator, n_product};
use voa::zhu::{default_max_weight, o_span_with, SpanFamily};

#[derive(Parser)]
#[command(name = "voa", version, about = "Exact computations in the free boson vertex algebra and its orbifold")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite of the identity catalog.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        rank: usize,
        /// Cap on the weight bound of O(V) spans.
        #[arg(long)]
        weight_bound: Option<i64>,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Catalog file to use instead of the shipped one.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// The n-th product a_n b of two elements, e.g. `product 'omega(1)' 1 'S(1,2;1,1)'`.
    Product {
        a: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        b: String,
        #[arg(long, default_value_t = 4)]
        rank: usize,
    },
    /// [a_i, b_j] applied to a state through the commutator formula.
    Commutator {
        a: String,
        #[arg(allow_hyphen_values = true)]
        i: i64,
        b: String,
        #[arg(allow_hyphen_values = true)]
        j: i64,
        #[arg(long)]
        on: String,
        #[arg(long, default_value_t = 4)]
        rank: usize,
    },
    /// Zhu algebra computations.
    Zhu {
        #[command(subcommand)]
        command: ZhuCommand,
    },
    /// Boundary calculus on the generic vector.
    Boundary {
        #[command(subcommand)]
        command: BoundaryCommand,
    },
    /// The last nonzero pseudo-remainder of two polynomials in a variable.
    Gpoly {
        a: String,
        b: String,
        #[arg(long)]
        var: String,
    },
    /// Twisted module computations.
    Twisted {
        #[command(subcommand)]
        command: TwistedCommand,
    },
}

#[derive(Subcommand)]
enum ZhuCommand {
    /// Decide membership in O(V) up to a weight bound.
    Member {
        expr: String,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long)]
        weight_bound: i64,
    },
}

#[derive(Subcommand)]
enum BoundaryCommand {
    /// Coefficients of S(i,j;1,r) words in the top action of a relation.
    Derive {
        #[arg(long)]
        relation: String,
        /// An integer, or `sym` for a symbolic bound.
        #[arg(long, default_value = "sym", allow_hyphen_values = true)]
        eps: String,
    },
}

#[derive(Subcommand)]
enum TwistedCommand {
    /// u_n on a twisted state; n may be half-integral.
    Mode {
        elem: String,
        #[arg(allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        on: String,
        #[arg(long, default_value_t = 4)]
        rank: usize,
    },
}

fn element(text: &str, rank: usize) -> anyhow::Result<State> {
    match eval_text(text, rank).with_context(|| format!("reading '{text}'"))? {
        Value::State(s) if s.module().is_vacuum() => Ok(s),
        v => bail!("'{text}' is a {}, expected an element of the vacuum module", v.kind_name()),
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Verify { suite, rank, weight_bound, format, out, catalog: path } => {
            let cat = match path {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    parse_catalog(&text)?
                }
                None => catalog::standard(),
            };
            let opts = RunOptions { rank, max_weight: weight_bound, assignment: None };
            let report = run_suite(&cat, &suite, &opts)?;
            emit_report(&report, format, out.as_deref())?;
            Ok(report.all_passed())
        }
        Command::Product { a, n, b, rank } => {
            let (a, b) = (element(&a, rank)?, element(&b, rank)?);
            println!("{}", n_product(&a, n, &b)?);
            Ok(true)
        }
        Command::Commutator { a, i, b, j, on, rank } => {
            let (a, b) = (element(&a, rank)?, element(&b, rank)?);
            let s = parse_state(&on, rank)?;
            println!("{}", eval_commutator(&a, i, &b, j, &s)?);
            Ok(true)
        }
        Command::Zhu { command: ZhuCommand::Member { expr, rank, weight_bound } } => {
            let v = element(&expr, rank)?;
            let cap = default_max_weight(rank).max(weight_bound);
            let m = o_span_with(rank, weight_bound, None, cap, SpanFamily::default())?.member(&v)?;
            if m.member {
                println!("member at weight bound {weight_bound}; certificate:");
                let show = |x: &voa::Monomial| State::monomial(ModuleKind::Vacuum { rank }, x.clone(), PolyQ::one());
                for (g, c) in &m.certificate {
                    println!("  {} * ({} o_{} {})", voa::exactalg::fmt_rat(c), show(&g.a), g.k, show(&g.b));
                }
            } else {
                println!("not a member at weight bound {weight_bound}");
            }
            Ok(m.member)
        }
        Command::Boundary { command: BoundaryCommand::Derive { relation, eps } } => {
            let rels = standard_relations();
            let key = relation.replace('_', "-");
            let rel = rels
                .iter()
                .find(|(n, _)| *n == key)
                .ok_or_else(|| anyhow!("unknown relation '{relation}'; known: s11-3, s11-4-1, s11-4-2, s11-4-3"))?;
            let mut spec = GenericVectorSpec::symbolic();
            if eps != "sym" {
                let e: i64 = eps.parse().with_context(|| format!("--eps must be an integer or 'sym', got '{eps}'"))?;
                spec = spec.with_eps(PolyQ::int(e));
            }
            let set = derive_constraints(std::slice::from_ref(rel), &spec)?;
            for (w, c) in set.words.iter().zip(&set.equations[0].coeffs) {
                println!("{w}: {c}");
            }
            Ok(true)
        }
        Command::Gpoly { a, b, var } => {
            let x = Var::new(&var);
            let pa = PolyQ::parse(&a).map_err(|e| anyhow!("{a}: {e}"))?;
            let pb = PolyQ::parse(&b).map_err(|e| anyhow!("{b}: {e}"))?;
            println!("{}", g_poly(&UniPoly::from_poly(&pa, x), &UniPoly::from_poly(&pb, x))?.to_poly());
            Ok(true)
        }
        Command::Twisted { command: TwistedCommand::Mode { elem, n, on, rank } } => {
            let u = element(&elem, rank)?;
            let n = Half::parse(&n).ok_or_else(|| anyhow!("mode index '{n}' is not an integer or half-integer"))?;
            let s = parse_state(&on, rank)?;
            println!("{}", twisted_n_product(&u, n, &s)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

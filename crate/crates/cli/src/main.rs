use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use nrc_slicer::json::{env_to_json, trace_from_json, trace_to_json, value_to_json};
use nrc_slicer::report::{SliceReport, SliceStats};
use nrc_slicer::table::environments;
use nrc_slicer::{
    diff_query_slice, diff_slice, eval, load_table, parse_pattern, parse_query, query_slice, render_diff,
    render_trace, replay, slice, typecheck_expr, Env, Error, Expr, Label, Pattern, Tail, Table, Trace, Type,
    TypeEnv, Value,
};

#[derive(Parser)]
#[command(name = "nrcslice", version, about = "Traced evaluation, replay and slicing of nested relational queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a query and print its value.
    Eval(Common),
    /// Evaluate a query and print its trace.
    Trace(Common),
    /// Replay a saved trace against (possibly changed) tables.
    Replay {
        #[command(flatten)]
        common: Common,
        /// Trace file written by `trace --format json`.
        #[arg(long)]
        trace: PathBuf,
    },
    /// Backward trace slice for an output pattern.
    Slice {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pattern: String,
    },
    /// Query slice for an output pattern.
    Qslice {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pattern: String,
    },
    /// Differential slice for a pair of nested patterns.
    Dslice {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        inner: String,
        #[arg(long)]
        outer: String,
    },
    /// Type-check a query against the tables.
    Check(Common),
    /// The workflow benchmark over T, U = {1..n}.
    BenchQ4 {
        #[arg(long, default_value_t = 50)]
        n: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// `name=path` or `path`; may be repeated.
    #[arg(long = "table", short = 't')]
    tables: Vec<String>,
    /// Query file.
    #[arg(long, conflicts_with = "expr")]
    query: Option<PathBuf>,
    /// Query text.
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[arg(long)]
    stats: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

struct Loaded {
    env: Env,
    types: TypeEnv,
    query: Option<Arc<Expr>>,
}

impl Common {
    fn load(&self) -> anyhow::Result<Loaded> {
        let mut tables = Vec::new();
        for spec in &self.tables {
            let (name, path) = match spec.split_once('=') {
                Some((n, p)) => (Some(n), p),
                None => (None, spec.as_str()),
            };
            let mut t = load_table(path.as_ref())?;
            if let Some(n) = name {
                t = Table::new(n, t.schema.clone(), rows(&t))?;
            }
            tables.push(t);
        }
        let (env, types) = environments(&tables)?;
        let src = match (&self.query, &self.expr) {
            (Some(p), _) => Some(std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?),
            (None, Some(e)) => Some(e.clone()),
            (None, None) => None,
        };
        let query = src.map(|s| parse_query(&s)).transpose()?;
        Ok(Loaded { env, types, query })
    }

    fn emit(&self, pretty: String, json: Json) -> anyhow::Result<()> {
        let text = match self.format {
            Format::Pretty => pretty,
            Format::Json => serde_json::to_string_pretty(&json)?,
        };
        write_out(self.out.as_ref(), &text)
    }
}

fn rows(t: &Table) -> Vec<(String, Value)> {
    t.value
        .as_coll()
        .map(|m| m.iter().map(|(l, v)| (l.atoms()[0].to_string(), v.clone())).collect())
        .unwrap_or_default()
}

fn write_out(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).with_context(|| format!("cannot write {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

impl Loaded {
    fn query(&self) -> anyhow::Result<&Arc<Expr>> {
        self.query.as_ref().ok_or_else(|| anyhow!("no query given; use --query or -e"))
    }

    /// Type-checks and evaluates the query.
    fn run(&self) -> anyhow::Result<(Arc<Expr>, Value, Trace)> {
        let q = self.query()?.clone();
        typecheck_expr(&self.types, &q)?;
        let (v, t) = eval(&self.env, &q)?;
        Ok((q, v, t))
    }
}

fn sliced(
    c: &Common,
    pattern: &str,
    query_too: bool,
) -> anyhow::Result<()> {
    let l = c.load()?;
    let p = parse_pattern(pattern)?;
    let (_, _, t) = l.run()?;
    let start = Instant::now();
    let mut report = if query_too {
        let (rho, e) = query_slice(&p, &t)?;
        let mut r = SliceReport::new(p, rho, &l.env);
        r.query = Some(e);
        r
    } else {
        let (rho, s) = slice(&p, &t)?;
        let mut r = SliceReport::new(p, rho, &l.env);
        r.trace = Some(s);
        r
    };
    let elapsed = start.elapsed();
    if c.stats {
        report.stats = Some(SliceStats {
            trace_size: t.size(),
            slice_size: report
                .trace
                .as_ref()
                .map(Trace::size)
                .or_else(|| report.query.as_ref().map(|q| q.size()))
                .unwrap_or(0),
            elapsed,
        });
    }
    c.emit(report.to_pretty().trim_end().to_string(), report.to_json())
}

fn int_table(name: &str, prefix: &str, n: i64) -> anyhow::Result<Table> {
    Ok(Table::new(
        name,
        Type::Int,
        (1..=n).map(|i| (format!("{prefix}{i}"), Value::int(i))).collect(),
    )?)
}

fn bench_q4(n: i64, out: Option<&PathBuf>) -> anyhow::Result<()> {
    if !(5..=200).contains(&n) {
        bail!("--n must be between 5 and 200");
    }
    let (env, types) = environments(&[int_table("T", "t", n)?, int_table("U", "u", n)?])?;
    let q = parse_query("for x in T, y in T, z in U where x < y, x * x + y * y = z * z return x * y")?;
    typecheck_expr(&types, &q)?;
    let start = Instant::now();
    let (v, t) = eval(&env, &q)?;
    let eval_time = start.elapsed();
    let results = v.as_coll().map_or(0, |m| m.len());
    let target = Label::parse("t3,t4,u5")?;
    let enriched = Pattern::try_set([(target.clone(), Pattern::int(12))], Tail::Hole)?;
    let simple = Pattern::try_set(
        v.as_coll()
            .into_iter()
            .flatten()
            .map(|(k, _)| (k.clone(), if *k == target { Pattern::int(12) } else { Pattern::Hole })),
        Tail::Closed,
    )?;
    let start = Instant::now();
    let (_, s_enriched) = slice(&enriched, &t)?;
    let enriched_time = start.elapsed();
    let start = Instant::now();
    let (_, s_simple) = slice(&simple, &t)?;
    let simple_time = start.elapsed();
    let inner = Pattern::try_set([(target, Pattern::Hole)], Tail::Hole)?;
    let ((_, qi), (_, qo)) = diff_query_slice(&inner, &enriched, &t)?;
    let report = json!({
        "n": n,
        "triples": n * n * n,
        "results": results,
        "trace_nodes": t.size(),
        "enriched_slice_nodes": s_enriched.size(),
        "simple_slice_nodes": s_simple.size(),
        "eval_ms": eval_time.as_secs_f64() * 1e3,
        "enriched_slice_ms": enriched_time.as_secs_f64() * 1e3,
        "simple_slice_ms": simple_time.as_secs_f64() * 1e3,
        "difference": render_diff(&qi, &qo),
    });
    write_out(out, &serde_json::to_string_pretty(&report)?)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Eval(c) => {
            let l = c.load()?;
            let (_, v, t) = l.run()?;
            let mut j = json!({ "value": value_to_json(&v) });
            if c.stats {
                j["trace_size"] = json!(t.size());
            }
            c.emit(v.to_string(), j)
        }
        Cmd::Trace(c) => {
            let l = c.load()?;
            let (_, v, t) = l.run()?;
            c.emit(
                format!("{}\n=> {v}", render_trace(&t)),
                json!({ "value": value_to_json(&v), "trace": trace_to_json(&t) }),
            )
        }
        Cmd::Replay { common: c, trace } => {
            let l = c.load()?;
            let text = std::fs::read_to_string(&trace).with_context(|| format!("cannot read {}", trace.display()))?;
            let j: Json = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
            let t = trace_from_json(j.get("trace").unwrap_or(&j))?;
            nrc_slicer::typecheck_trace(&l.types, &t)?;
            let v = replay(&l.env, &t)?;
            c.emit(v.to_string(), json!({ "value": value_to_json(&v) }))
        }
        Cmd::Slice { common, pattern } => sliced(&common, &pattern, false),
        Cmd::Qslice { common, pattern } => sliced(&common, &pattern, true),
        Cmd::Dslice { common: c, inner, outer } => {
            let l = c.load()?;
            let (pi, po) = (parse_pattern(&inner)?, parse_pattern(&outer)?);
            let (_, _, t) = l.run()?;
            let ((rho1, s1), (rho2, s2)) = diff_slice(&pi, &po, &t)?;
            let ((_, q1), (_, q2)) = diff_query_slice(&pi, &po, &t)?;
            let inner_r = SliceReport::new(pi, rho1, &l.env);
            let outer_r = SliceReport::new(po, rho2, &l.env);
            let mut pretty = format!("difference:\n  {}\n", render_diff(&q1, &q2));
            pretty.push_str("input (inner):\n");
            for (x, p) in inner_r.input_resolved.iter() {
                pretty.push_str(&format!("  {x} = {p}\n"));
            }
            pretty.push_str("input (outer):\n");
            for (x, p) in outer_r.input_resolved.iter() {
                pretty.push_str(&format!("  {x} = {p}\n"));
            }
            if c.stats {
                pretty.push_str(&format!("trace size {}, inner {}, outer {}\n", t.size(), s1.size(), s2.size()));
            }
            let j = json!({
                "difference": render_diff(&q1, &q2),
                "inner": { "input": env_to_json(&inner_r.input_resolved), "query": q1.to_string(), "trace": trace_to_json(&s1) },
                "outer": { "input": env_to_json(&outer_r.input_resolved), "query": q2.to_string(), "trace": trace_to_json(&s2) },
            });
            c.emit(pretty.trim_end().to_string(), j)
        }
        Cmd::Check(c) => {
            let l = c.load()?;
            let ty = typecheck_expr(&l.types, l.query()?)?;
            c.emit(ty.to_string(), json!({ "type": nrc_slicer::json::type_to_json(&ty) }))
        }
        Cmd::BenchQ4 { n, out } => bench_q4(n, out.as_ref()),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) => err.exit_code() as u8,
        None => 2,
    }
}

fn describe(e: &anyhow::Error) -> String {
    match e.downcast_ref::<Error>() {
        Some(Error::ControlFlowMismatch { .. }) => format!("replay failed (control-flow mismatch): {e}"),
        Some(Error::MissingTraceLabel { .. }) => format!("replay failed (missing trace label): {e}"),
        Some(Error::HoleEncountered { .. }) => format!("replay failed (hole in trace): {e}"),
        _ => format!("{e:#}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nrcslice: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use nrc_slicer::label::is_prefix_code;
use nrc_slicer::oracle::{self, QueryGen};
use nrc_slicer::pattern::leq_env;
use nrc_slicer::report::resolve_env;
use nrc_slicer::table::environments;
use nrc_slicer::*;
use rand::Rng;

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const Q4_BUDGET: Duration = Duration::from_secs(60);
const Q4_MIN_TRACE_NODES: usize = 1_000_000;
const Q4_MAX_SLICE_NODES: usize = 200;
const Q4_MIN_SPEEDUP: f64 = 10.0;
const PROPERTY_CASES: usize = 500;
const PERTURBATIONS: u64 = 5;
const MAX_DEPTH: usize = 5;
const MAX_ROWS: usize = 6;

#[derive(Default)]
struct Outcome {
    checks: usize,
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failed.push(what.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Display>(&mut self, what: &str, got: T, want: T) {
        let ok = got == want;
        self.check(format!("{what}: got {got}, want {want}"), ok);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn run<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.check(format!("{what}: {e}"), false);
                None
            }
        }
    }
}

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

fn query(file: &str) -> std::sync::Arc<Expr> {
    parse_query(&std::fs::read_to_string(data(file)).unwrap()).unwrap()
}

fn tables(names: &[&str]) -> (Env, TypeEnv) {
    let ts: Vec<Table> = names
        .iter()
        .map(|n| load_table(&data(&format!("{n}.json"))).unwrap())
        .collect();
    environments(&ts).unwrap()
}

fn pat(s: &str) -> Pattern {
    parse_pattern(s).unwrap()
}

fn val(s: &str) -> Value {
    parse_value(s).unwrap()
}

fn l(s: &str) -> Label {
    Label::parse(s).unwrap()
}

/// Labels of a comprehension trace and of each nested comprehension.
fn comp_shape(t: &Trace) -> Vec<(Label, Vec<Label>)> {
    match t {
        Trace::Comp { traces, .. } => traces
            .iter()
            .map(|(k, sub)| {
                let inner = match sub {
                    Trace::Comp { traces, .. } => traces.keys().cloned().collect(),
                    _ => Vec::new(),
                };
                (k.clone(), inner)
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn theta(t: &Trace) -> Option<&TraceSet> {
    match t {
        Trace::Comp { traces, .. } => Some(traces),
        _ => None,
    }
}

fn taken(t: &Trace) -> Option<bool> {
    match t {
        Trace::If { taken, .. } => Some(*taken),
        _ => None,
    }
}

// Criterion 1

fn golden(o: &mut Outcome) {
    let start = Instant::now();
    let (env, _) = tables(&["R"]);
    o.eq(
        "R0",
        env["R"].clone(),
        val("{[r1].<A:1,B:2,C:7>,[r2].<A:2,B:3,C:8>,[r3].<A:4,B:3,C:9>}"),
    );
    let q = query("q.nrc");
    o.eq(
        "Q",
        q.to_string(),
        "union {if x.B = 3 then {<A: x.A, B: x.C>} else {} | x in R}".to_string(),
    );
    let Some((v, t)) = o.run("eval Q", eval(&env, &q)) else { return };
    o.eq("Q(R0)", v.clone(), val("{[r2].<A:2,B:8>,[r3].<A:4,B:9>}"));

    let th = theta(&t).cloned().unwrap_or_default();
    o.check("trace source is R", matches!(&t, Trace::Comp { source, .. } if **source == Trace::Var("R".into())));
    o.eq(
        "trace labels",
        format!("{:?}", th.keys().map(|k| k.to_string()).collect::<Vec<_>>()),
        format!("{:?}", ["[r1]", "[r2]", "[r3]"]),
    );
    let branches: Vec<Option<bool>> = th.values().map(taken).collect();
    o.check("branches false/true/true", branches == [Some(false), Some(true), Some(true)]);
    let bodies_ok = th.values().enumerate().all(|(i, sub)| match sub {
        Trace::If { branch, .. } if i == 0 => matches!(**branch, Trace::Empty(_)),
        Trace::If { branch, .. } => matches!(&**branch, Trace::Singleton(r) if matches!(**r, Trace::Record(_))),
        _ => false,
    });
    o.check("taken-branch subtraces", bodies_ok);

    // Simple pattern: the rules keep r1 and r3 control flow, see the
    // companion check below for why the collapsed form is not a valid slice.
    let p = pat("{[r2].<A:_,B:8>,[r3]._}");
    if let Some((rho, s)) = o.run("slice p", slice(&p, &t)) {
        o.eq(
            "R' resolved",
            resolve_env(&rho, &env).get("R"),
            pat("{[r1].<B:2;_>,[r2].<B:3,C:8;_>,[r3].<B:3;_>}"),
        );
        o.check("R' below R0", matches(&rho.get("R"), &env["R"]));
        o.check("T' below T", is_subtrace(&s, &t));
        o.eq(
            "T'",
            render_trace(&s),
            [
                "comp(x; if x.B = 3 then {<A: x.A, B: x.C>} else {}; R) {",
                "  [r1]: if((x.B = 3); {<A: x.A, B: x.C>}; {}) =>false {}",
                "  [r2]: if((x.B = 3); {<A: x.A, B: x.C>}; {}) =>true {<A: _, B: x.C>}",
                "  [r3]: if((x.B = 3); {<A: x.A, B: x.C>}; {}) =>true {_}",
                "}",
            ]
            .join("\n"),
        );
        collapsed_slice_counterexample(o, &env, &t, &v, &p);
    }

    let p2 = pat("{[r2].<B:8;_>} U _");
    if let Some((rho, s)) = o.run("slice p'", slice(&p2, &t)) {
        o.eq("R'' raw", rho.get("R"), pat("{[r2].<B:*,C:8;_>} U _"));
        o.eq("R''", resolve_env(&rho, &env).get("R"), pat("{[r2].<B:3,C:8;_>} U _"));
        o.eq(
            "T''",
            render_trace(&s),
            [
                "comp(x; if x.B = 3 then {<A: x.A, B: x.C>} else {}; R) {",
                "  [r2]: if((x.B = 3); {<A: x.A, B: x.C>}; {}) =>true {<A: _, B: x.C>}",
                "}",
            ]
            .join("\n"),
        );
    }
    if let Some((rho, e)) = o.run("query slice p'", query_slice(&p2, &t)) {
        o.eq(
            "Q'",
            e,
            parse_query("union {if x.B = 3 then {<A: _, B: x.C>} else _ | x in R}").unwrap(),
        );
        o.eq("Q' input", rho.get("R"), pat("{[r2].<B:*,C:8;_>} U _"));
    }
    let inner = pat("{[r2].<B:_;_>} U _");
    if let Some(((_, qi), (_, qo))) = o.run("differential query slice", diff_query_slice(&inner, &p2, &t)) {
        o.eq(
            "Q''",
            render_diff(&qi, &qo),
            "union {if x.B = 3 then {<A: _, B: [[x.C]]>} else _ | x in R}".to_string(),
        );
    }
    let elapsed = start.elapsed();
    o.check(format!("runtime {elapsed:?} < {GOLDEN_BUDGET:?}"), elapsed < GOLDEN_BUDGET);
}

/// The collapsed simple-pattern slice (r1 and r3 as □, r1 unconstrained)
/// admits a filling and input under which the closed pattern is violated.
fn collapsed_slice_counterexample(o: &mut Outcome, env: &Env, t: &Trace, v: &Value, p: &Pattern) {
    let Trace::Comp { body, var, source, traces } = t else { return };
    let mut collapsed = traces.clone();
    collapsed.insert(l("r1"), Trace::Hole);
    collapsed.insert(l("r3"), Trace::Hole);
    let collapsed = Trace::Comp {
        body: body.clone(),
        var: var.clone(),
        source: source.clone(),
        traces: collapsed,
    };
    let mut filled = collapsed.clone();
    if let Trace::Comp { traces: th, .. } = &mut filled {
        th.insert(l("r1"), traces[&l("r2")].clone());
        th.insert(l("r3"), traces[&l("r3")].clone());
    }
    let mut changed = env.clone();
    changed.insert(
        "R".into(),
        val("{[r1].<A:0,B:3,C:0>,[r2].<A:2,B:3,C:8>,[r3].<A:4,B:3,C:9>}"),
    );
    let rho_collapsed = pat("{[r1]._,[r2].<A:_,B:3,C:8>,[r3]._}");
    let admissible = matches(&rho_collapsed, &changed["R"])
        && equiv_at(&rho_collapsed, &env["R"], &changed["R"])
        && is_subtrace(&collapsed, &filled);
    let violated = match replay(&changed, &filled) {
        Ok(w) => !equiv_at(p, v, &w),
        Err(_) => false,
    };
    o.check("collapsed slice has a counterexample", admissible && violated);
}

// Criterion 2

fn worked_examples(o: &mut Outcome) {
    let start = Instant::now();
    let (env, _) = tables(&["R", "S"]);

    let q1 = query("q1.nrc");
    if let Some((v, t)) = o.run("eval Q1", eval(&env, &q1)) {
        o.eq("Q1(R0)", v, val("{[r1].<A:1,B:2,C:7>,[r2].<A:2,B:3,C:8>,[r3].<A:3,B:4,C:9>}"));
        if let Some((rho, s)) = o.run("slice Q1", slice(&pat("{[r1].<B:2;_>} U _"), &t)) {
            o.eq("Q1 input", resolve_env(&rho, &env).get("R"), pat("{[r1].<A:1,B:2;_>} U _"));
            let kept: Vec<_> = theta(&s).map(|th| th.keys().cloned().collect()).unwrap_or_default();
            o.check("Q1 slice keeps only r1", kept == [l("r1")]);
            // A change that keeps A <= B on r1 replays; one that flips it does not.
            let mut ok = env.clone();
            ok.insert("R".into(), val("{[r1].<A:0,B:2,C:70>,[r2].<A:0,B:9,C:0>}"));
            let filled = oracle::fill_holes(&s, &t, &TypeEnv::new(), 1);
            o.check("Q1 replay after order-preserving change", replay(&ok, &filled).is_ok());
            let mut bad = env.clone();
            bad.insert("R".into(), val("{[r1].<A:3,B:2,C:7>}"));
            o.check(
                "Q1 replay after order flip fails",
                matches!(replay(&bad, &s), Err(Error::ControlFlowMismatch { .. })),
            );
        }
    }

    let q2 = query("q2.nrc");
    if let Some((v, t)) = o.run("eval Q2", eval(&env, &q2)) {
        o.eq("Q2(R0)", v.clone(), val("{[1,r1].<B:2>,[1,r2].<B:3>,[1,r3].<B:3>,[2].<B:3>}"));
        o.check("Q2 labels form a prefix code", v.is_prefix_labeled());
        if let Some((rho, e)) = o.run("query slice Q2'", query_slice(&pat("{[1,r2].<B:3>} U _"), &t)) {
            o.eq("Q2'", e, parse_query("union {union {{<B: x.B>} | x in R}, _}").unwrap());
            o.eq("R2'", resolve_env(&rho, &env).get("R"), pat("{[r2].<B:3;_>} U _"));
        }
        if let Some((rho, e)) = o.run("query slice Q2''", query_slice(&pat("{[2].<B:3>} U _"), &t)) {
            o.eq("Q2''", e, parse_query("union {_, {<B: 3>}}").unwrap());
            o.eq("R2''", rho.get("R"), Pattern::Hole);
        }
    }

    let q3 = query("q3.nrc");
    if let Some((v, t)) = o.run("eval Q3", eval(&env, &q3)) {
        o.eq("Q3(R0,S)", v, val("{[r1,s1].<A:1,B:4>,[r2,s2].<A:2,B:4>,[r3,s2].<A:4,B:4>}"));
        let taken_true: Vec<(Label, Vec<Label>)> = theta(&t)
            .map(|th| {
                th.iter()
                    .map(|(k, sub)| {
                        let yes = theta(sub)
                            .map(|inner| inner.iter().filter(|(_, x)| taken(x) == Some(true)).map(|(k, _)| k.clone()).collect())
                            .unwrap_or_default();
                        (k.clone(), yes)
                    })
                    .collect()
            })
            .unwrap_or_default();
        o.check(
            "T3 matches per pair",
            taken_true == vec![(l("r1"), vec![l("s1")]), (l("r2"), vec![l("s2")]), (l("r3"), vec![l("s2")])]
                && comp_shape(&t).iter().all(|(_, inner)| inner.len() == 3),
        );
        let p3 = pat("{[r1,s1].<A:1;_>,[r2,s2].<B:4;_>} U _");
        if let Some((rho, s)) = o.run("slice Q3", slice(&p3, &t)) {
            o.check(
                "T3'",
                comp_shape(&s) == vec![(l("r1"), vec![l("s1")]), (l("r2"), vec![l("s2")])]
                    && theta(&s).is_some_and(|th| th.values().all(|sub| theta(sub).is_some_and(|i| i.values().all(|x| taken(x) == Some(true))))),
            );
            let r = resolve_env(&rho, &env);
            o.eq("R3'", r.get("R"), pat("{[r1].<A:1,B:2;_>,[r2].<B:3;_>} U _"));
            o.eq("S3'", r.get("S"), pat("{[s1].<B:2;_>,[s2].<B:3,C:4;_>} U _"));
        }
    }
    let elapsed = start.elapsed();
    o.check(format!("runtime {elapsed:?} < {GOLDEN_BUDGET:?}"), elapsed < GOLDEN_BUDGET);
}

// Criterion 3

fn int_table(name: &str, prefix: &str, n: i64) -> Table {
    Table::new(name, Type::Int, (1..=n).map(|i| (format!("{prefix}{i}"), Value::int(i))).collect()).unwrap()
}

fn count_leaves(t: &Trace, depth: usize) -> usize {
    match (t, depth) {
        (Trace::Comp { traces, .. }, 0) => traces.len(),
        (Trace::Comp { traces, .. }, d) => traces.values().map(|s| count_leaves(s, d - 1)).sum(),
        (Trace::If { branch, .. }, d) => count_leaves(branch, d),
        _ => 0,
    }
}

fn best_of<T>(runs: usize, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..runs {
        let s = Instant::now();
        let r = f();
        best = best.min(s.elapsed());
        out = Some(r);
    }
    (best, out.unwrap())
}

fn q4_benchmark(o: &mut Outcome) {
    let start = Instant::now();
    let n = 50;
    let (env, _) = environments(&[int_table("T", "t", n), int_table("U", "u", n)]).unwrap();
    let q = query("q4.nrc");
    let Some((v, t)) = o.run("eval Q4", eval(&env, &q)) else { return };
    o.eq("triples iterated", count_leaves(&t, 2), (n * n * n) as usize);

    let mut oracle_result = BTreeMap::new();
    for x in 1..=n {
        for y in x + 1..=n {
            for z in 1..=n {
                if x * x + y * y == z * z {
                    oracle_result.insert(l(&format!("t{x},t{y},u{z}")), Value::int(x * y));
                }
            }
        }
    }
    o.eq("result size", v.as_coll().map_or(0, |m| m.len()), 20);
    o.check("result equals brute-force oracle", v == Value::coll(oracle_result).unwrap());

    let size = t.size();
    o.check(format!("trace nodes {size} >= {Q4_MIN_TRACE_NODES}"), size >= Q4_MIN_TRACE_NODES);

    let target = l("t3,t4,u5");
    let enriched = Pattern::try_set([(target.clone(), Pattern::int(12))], Tail::Hole).unwrap();
    let simple = Pattern::try_set(
        v.as_coll().unwrap().keys().map(|k| {
            (k.clone(), if *k == target { Pattern::int(12) } else { Pattern::Hole })
        }),
        Tail::Closed,
    )
    .unwrap();
    let (t_enriched, r_enriched) = best_of(5, || slice(&enriched, &t));
    let (t_simple, r_simple) = best_of(3, || slice(&simple, &t));
    let (Some((rho, s)), Some(_)) = (o.run("enriched slice", r_enriched), o.run("simple slice", r_simple)) else {
        return;
    };
    let ssize = s.size();
    o.check(format!("enriched slice nodes {ssize} <= {Q4_MAX_SLICE_NODES}"), ssize <= Q4_MAX_SLICE_NODES);
    o.eq("T'", rho.get("T"), pat("{[t3].*,[t4].*} U _"));
    o.eq("U'", rho.get("U"), pat("{[u5].*} U _"));
    let speedup = t_simple.as_secs_f64() / t_enriched.as_secs_f64().max(1e-9);
    o.check(
        format!("speedup {speedup:.0}x >= {Q4_MIN_SPEEDUP}x ({t_simple:?} vs {t_enriched:?})"),
        speedup >= Q4_MIN_SPEEDUP,
    );
    o.note(format!(
        "trace {size} nodes, slice {ssize} nodes, simple {t_simple:?}, enriched {t_enriched:?}"
    ));

    let inner = Pattern::try_set([(target, Pattern::Hole)], Tail::Hole).unwrap();
    if let Some(((_, qi), (_, qo))) = o.run("Q4 differential query slice", diff_query_slice(&inner, &enriched, &t)) {
        o.eq("Q4 query slice", qo.to_string(), {
            "union {union {union {if x < y then if x * x + y * y = z * z then {x * y} else _ else _ | z in U} | y in T} | x in T}".to_string()
        });
        o.eq(
            "Q4 difference",
            render_diff(&qi, &qo),
            "union {union {union {if x < y then if x * x + y * y = z * z then {[[x * y]]} else _ else _ | z in U} | y in T} | x in T}"
                .to_string(),
        );
    }
    let elapsed = start.elapsed();
    o.check(format!("runtime {elapsed:?} < {Q4_BUDGET:?}"), elapsed < Q4_BUDGET);
}

// Criterion 4

struct Case {
    env: Env,
    ctx: TypeEnv,
    query: std::sync::Arc<Expr>,
    value: Value,
    trace: Trace,
}

/// Well-typed random queries whose evaluation succeeds, `PROPERTY_CASES` of them.
fn cases(seed: u64) -> (Vec<Case>, usize) {
    let mut rng = oracle::rng(seed);
    let mut out = Vec::new();
    let mut rejected = 0;
    while out.len() < PROPERTY_CASES {
        let ts = oracle::random_tables(&mut rng, MAX_ROWS);
        let (env, ctx) = environments(&ts).unwrap();
        let query = QueryGen::new(&mut rng).query(&ctx, MAX_DEPTH);
        match eval(&env, &query) {
            Ok((value, trace)) => out.push(Case { env, ctx, query, value, trace }),
            Err(_) => rejected += 1,
        }
    }
    (out, rejected)
}

fn perturb_constants(rng: &mut impl Rng, v: &Value) -> Value {
    match v {
        Value::Const(Const::Int(_)) => Value::int(rng.gen_range(0..5)),
        Value::Const(Const::Bool(_)) => Value::bool(rng.gen()),
        Value::Record(fs) => Value::Record(fs.iter().map(|(k, x)| (k.clone(), perturb_constants(rng, x))).collect()),
        Value::Coll(m) => Value::Coll(m.iter().map(|(k, x)| (k.clone(), perturb_constants(rng, x))).collect()),
    }
}

fn properties(o: &mut Outcome) {
    let (cases, rejected) = cases(0x5eed);
    o.note(format!("{} cases, {rejected} generated queries rejected at runtime", cases.len()));
    let mut rng = oracle::rng(7);
    let mut stats = BTreeMap::<&str, (usize, usize)>::new();
    let mut bump = |k: &'static str, replayed: bool| {
        let e = stats.entry(k).or_default();
        e.0 += 1;
        if replayed {
            e.1 += 1;
        }
    };
    let mut first_failure = BTreeMap::<&str, String>::new();
    let mut fail = |o: &mut Outcome, prop: &'static str, ok: bool, i: usize, q: &Expr| {
        o.checks += 1;
        if !ok {
            first_failure.entry(prop).or_insert_with(|| format!("{prop} case {i}: {q}"));
        }
    };
    for (i, c) in cases.iter().enumerate() {
        let q = &*c.query;
        // Determinacy.
        let again = eval(&c.env, &c.query);
        fail(o, "determinacy", again.as_ref().ok() == Some(&(c.value.clone(), c.trace.clone())), i, q);
        // Well-typedness of the trace.
        fail(o, "trace typing", typecheck_trace(&c.ctx, &c.trace).is_ok(), i, q);
        // Consistency.
        fail(o, "consistency", replay(&c.env, &c.trace).as_ref() == Ok(&c.value), i, q);
        // Prefix codes.
        fail(o, "prefix codes", c.value.is_prefix_labeled(), i, q);

        // Fidelity over arbitrary and domain-preserving variations.
        for k in 0..PERTURBATIONS {
            let any = oracle::vary_env(&c.env, &PatternEnv::new(), i as u64 * 31 + k);
            let r = replay(&any, &c.trace);
            let e = eval(&any, &c.query);
            let ok = match (&r, &e) {
                (Ok(v1), Ok((v2, _))) => v1 == v2,
                (Err(_), Ok((_, t2))) => t2 != &c.trace,
                (Ok(_), Err(_)) => false,
                (Err(_), Err(_)) => true,
            };
            fail(o, "fidelity", ok, i, q);
            let same_shape: Env = c.env.iter().map(|(x, v)| (x.clone(), perturb_constants(&mut rng, v))).collect();
            let r = replay(&same_shape, &c.trace);
            let e = eval(&same_shape, &c.query);
            let ok = match (&r, &e) {
                (Ok(v1), Ok((v2, t2))) => v1 == v2 && t2 == &c.trace,
                (Err(_), Ok((_, t2))) => t2 != &c.trace,
                (_, Err(_)) => r.is_err(),
            };
            fail(o, "fidelity (same domains, iff)", ok, i, q);
        }

        // Slicing correctness.
        let p = oracle::pattern_below(&mut rng, &c.value);
        match slice(&p, &c.trace) {
            Ok((rho, s)) => {
                let below = rho.iter().all(|(x, px)| c.env.get(x).is_some_and(|v| matches(px, v)));
                fail(o, "slice below input and trace", below && is_subtrace(&s, &c.trace), i, q);
                for k in 0..PERTURBATIONS {
                    let seed = (i as u64) << 8 | k;
                    let filled = oracle::fill_holes(&s, &c.trace, &c.ctx, seed);
                    let env2 = oracle::vary_env(&c.env, &rho, seed);
                    let okfill = is_subtrace(&s, &filled) && equiv_env(&rho, &c.env, &env2);
                    let (ok, replayed) = match replay(&env2, &filled) {
                        Ok(w) => (equiv_at(&p, &c.value, &w), true),
                        Err(_) => (true, false),
                    };
                    bump("slicing", replayed);
                    fail(o, "slicing correctness", ok && okfill, i, q);
                }
            }
            Err(_) => fail(o, "slicing defined", false, i, q),
        }

        // Query-slicing correctness.
        match query_slice(&p, &c.trace) {
            Ok((rho, e)) => {
                fail(o, "query slice below query", leq_expr(&e, &c.query), i, q);
                for k in 0..PERTURBATIONS {
                    let seed = (i as u64) << 8 | k;
                    let filled = oracle::fill_expr_holes(&e, &c.query, &c.ctx, seed);
                    let env2 = oracle::vary_env(&c.env, &rho, seed);
                    let okfill = leq_expr(&e, &filled) && equiv_env(&rho, &c.env, &env2);
                    let (ok, ran) = match eval(&env2, &filled) {
                        Ok((w, _)) => (equiv_at(&p, &c.value, &w), true),
                        Err(_) => (true, false),
                    };
                    bump("query slicing", ran);
                    fail(o, "query-slicing correctness", ok && okfill, i, q);
                }
            }
            Err(_) => fail(o, "query slicing defined", false, i, q),
        }

        // Monotonicity.
        let outer = oracle::pattern_below(&mut rng, &c.value);
        let inner = oracle::weaken(&mut rng, &outer);
        fail(o, "weaken gives a smaller pattern", leq(&inner, &outer), i, q);
        let mono = match (slice(&inner, &c.trace), slice(&outer, &c.trace)) {
            (Ok((r1, s1)), Ok((r2, s2))) => {
                leq_env(&r1, &r2) && is_subtrace(&s1, &s2) && slice(&inner, &s2).ok() == Some((r1, s1))
            }
            _ => false,
        };
        fail(o, "monotonicity", mono, i, q);
        let qmono = match (query_slice(&inner, &c.trace), query_slice(&outer, &c.trace)) {
            (Ok((r1, e1)), Ok((r2, e2))) => leq_env(&r1, &r2) && leq_expr(&e1, &e2),
            _ => false,
        };
        fail(o, "query-slice monotonicity", qmono, i, q);
    }
    for (k, (n, ok)) in stats {
        o.note(format!("{k}: {ok}/{n} perturbed runs succeeded"));
    }
    for (_, f) in first_failure {
        o.failed.push(f);
    }
}

fn equiv_env(rho: &PatternEnv, a: &Env, b: &Env) -> bool {
    a.iter().all(|(x, v)| b.get(x).is_some_and(|w| equiv_at(&rho.get(x), v, w)))
}

// Criterion 5

#[derive(Clone, Copy, Debug)]
enum Sort {
    Int,
    Rec,
    Set,
}

const SORTS: [Sort; 3] = [Sort::Int, Sort::Rec, Sort::Set];

fn universe_labels() -> Vec<Label> {
    vec![Label::empty(), l("a"), l("b"), l("a,b")]
}

/// Label sets of at most two labels that form prefix codes.
fn domains() -> Vec<Vec<Label>> {
    let ls = universe_labels();
    let mut out = vec![vec![]];
    for (i, a) in ls.iter().enumerate() {
        out.push(vec![a.clone()]);
        for b in &ls[i + 1..] {
            if is_prefix_code([a, b]) {
                out.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    out
}

fn consts() -> Vec<Value> {
    vec![Value::int(0), Value::int(1)]
}

fn values(s: Sort) -> Vec<Value> {
    match s {
        Sort::Int => consts(),
        Sort::Rec => {
            let mut out = Vec::new();
            for a in consts() {
                for b in consts() {
                    out.push(Value::record([("A", a.clone()), ("B", b)]));
                }
            }
            out
        }
        Sort::Set => {
            let mut out = Vec::new();
            for d in domains() {
                let mut acc: Vec<Vec<(Label, Value)>> = vec![vec![]];
                for k in &d {
                    acc = acc
                        .into_iter()
                        .flat_map(|pre| {
                            consts().into_iter().map(move |c| {
                                let mut v = pre.clone();
                                v.push((k.clone(), c));
                                v
                            })
                        })
                        .collect();
                }
                out.extend(acc.into_iter().map(|es| Value::coll(es).unwrap()));
            }
            out
        }
    }
}

fn tails() -> [Tail; 3] {
    [Tail::Closed, Tail::Hole, Tail::Diamond]
}

fn int_patterns() -> Vec<Pattern> {
    vec![Pattern::Hole, Pattern::Diamond, Pattern::int(0), Pattern::int(1)]
}

/// Every pattern of a sort, in normal form and without duplicates.
fn patterns(s: Sort) -> Vec<Pattern> {
    let mut out = BTreeSet::new();
    match s {
        Sort::Int => out.extend(int_patterns()),
        Sort::Rec => {
            out.insert(Pattern::Hole);
            out.insert(Pattern::Diamond);
            let opts: Vec<Option<Pattern>> = std::iter::once(None).chain(int_patterns().into_iter().map(Some)).collect();
            for a in &opts {
                for b in &opts {
                    for t in tails() {
                        let fs: Vec<(&str, Pattern)> = [("A", a), ("B", b)]
                            .into_iter()
                            .filter_map(|(k, p)| p.clone().map(|p| (k, p)))
                            .collect();
                        out.insert(Pattern::record(fs, t));
                    }
                }
            }
        }
        Sort::Set => {
            out.insert(Pattern::Hole);
            out.insert(Pattern::Diamond);
            for d in domains() {
                let mut acc: Vec<BTreeMap<Label, Pattern>> = vec![BTreeMap::new()];
                for k in &d {
                    acc = acc
                        .into_iter()
                        .flat_map(|pre| {
                            int_patterns().into_iter().map(move |p| {
                                let mut m = pre.clone();
                                m.insert(k.clone(), p);
                                m
                            })
                        })
                        .collect();
                }
                for m in acc {
                    for t in tails() {
                        out.insert(Pattern::set(m.clone(), t));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Every pattern `p` with `p ⊑ v`.
fn patterns_below(v: &Value) -> Vec<Pattern> {
    fn entries<K: Ord + Clone>(m: &BTreeMap<K, Value>) -> Vec<(BTreeMap<K, Pattern>, bool)> {
        let mut acc: Vec<(BTreeMap<K, Pattern>, bool)> = vec![(BTreeMap::new(), true)];
        for (k, x) in m {
            let subs = patterns_below(x);
            acc = acc
                .into_iter()
                .flat_map(|(pre, full)| {
                    let mut next = vec![(pre.clone(), false)];
                    for s in &subs {
                        let mut m2 = pre.clone();
                        m2.insert(k.clone(), s.clone());
                        next.push((m2, full));
                    }
                    next
                })
                .collect();
        }
        acc
    }
    let mut out = BTreeSet::from([Pattern::Hole, Pattern::Diamond]);
    match v {
        Value::Const(c) => {
            out.insert(Pattern::Const(*c));
        }
        Value::Record(fs) => {
            for (m, full) in entries(fs) {
                for t in tails() {
                    if full || t != Tail::Closed {
                        out.insert(Pattern::Record(m.clone(), t));
                    }
                }
            }
        }
        Value::Coll(cs) => {
            for (m, full) in entries(cs) {
                for t in tails() {
                    if full || t != Tail::Closed {
                        out.insert(Pattern::set(m.clone(), t));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

fn pattern_algebra(o: &mut Outcome) {
    let mut violations = BTreeMap::<&str, (usize, String)>::new();
    let mut counts = BTreeMap::<&str, usize>::new();
    let mut law = |name: &'static str, ok: bool, ctx: &dyn Fn() -> String| {
        *counts.entry(name).or_default() += 1;
        if !ok {
            let e = violations.entry(name).or_insert((0, ctx()));
            e.0 += 1;
        }
    };

    for s in SORTS {
        let ps = patterns(s);
        let vs = values(s);
        let mut all: Vec<Pattern> = ps.clone();
        all.extend(vs.iter().map(Pattern::from_value));
        all.sort();
        all.dedup();

        for p in &all {
            for v in &vs {
                law("matches agrees with leq", matches(p, v) == leq(p, &Pattern::from_value(v)), &|| format!("{p} {v}"));
                if matches(p, v) {
                    law("matching values are self-equivalent", equiv_at(p, v, v), &|| format!("{p} {v}"));
                }
            }
            let d = diamondize(p);
            for v in &vs {
                for w in &vs {
                    law(
                        "diamondize iff equality",
                        equiv_at(&d, v, w) == (equiv_at(p, v, w) && v == w),
                        &|| format!("{p} {v} {w}"),
                    );
                }
            }
        }

        for p in &all {
            law("leq reflexive", leq(p, p), &|| format!("{p}"));
            for q in &all {
                let pq = leq(p, q);
                if pq && leq(q, p) {
                    law("leq antisymmetric", p == q, &|| format!("{p} {q}"));
                }
                if pq {
                    // ⊑ is sound for equivalence: a larger pattern relates fewer pairs.
                    let sound = vs.iter().all(|v| vs.iter().all(|w| !equiv_at(q, v, w) || equiv_at(p, v, w)));
                    law("leq refines equivalence", sound, &|| format!("{p} {q}"));
                    for r in &all {
                        if leq(q, r) {
                            law("leq transitive", leq(p, r), &|| format!("{p} {q} {r}"));
                        }
                    }
                }
                match lub(p, q) {
                    Ok(j) => {
                        law("lub is an upper bound", leq(p, &j) && leq(q, &j), &|| format!("{p} {q} {j}"));
                        law("lub commutes", lub(q, p).ok() == Some(j.clone()), &|| format!("{p} {q}"));
                        for v in &vs {
                            for w in &vs {
                                law(
                                    "lub soundness",
                                    equiv_at(&j, v, w) == (equiv_at(p, v, w) && equiv_at(q, v, w)),
                                    &|| format!("{p} ⊔ {q} = {j} on {v}, {w}"),
                                );
                            }
                        }
                        for r in &all {
                            if leq(p, r) && leq(q, r) {
                                law("lub is least", leq(&j, r), &|| format!("{p} {q} {r}"));
                            }
                        }
                    }
                    Err(_) => {
                        let common = all.iter().any(|r| leq(p, r) && leq(q, r));
                        law("lub exists when bounded", !common, &|| format!("{p} {q}"));
                    }
                }
            }
        }

        if let Sort::Rec = s {
            for v in &vs {
                let fs = v.as_record().unwrap();
                for p in patterns_below(v) {
                    law("below matches", matches(&p, v), &|| format!("{p} {v}"));
                    for (a, va) in fs {
                        let pa = field_project(&p, a);
                        law("projection .A below", pa.as_ref().is_ok_and(|pa| matches(pa, va)), &|| format!("{p}.{a}"));
                    }
                    for w in &vs {
                        let wf = w.as_record().unwrap();
                        let all_fields = fs.iter().all(|(a, va)| {
                            field_project(&p, a).is_ok_and(|pa| equiv_at(&pa, va, &wf[a]))
                        });
                        if all_fields {
                            law("projection .A equivalence", equiv_at(&p, v, w), &|| format!("{p} {v} {w}"));
                        }
                    }
                }
            }
        }
    }

    // Collection lemmas over element values of sort int.
    let sets = values(Sort::Set);
    let one = Label::nat(1);
    let two = Label::nat(2);
    for v in &sets {
        for p in patterns_below(v) {
            law("below matches", matches(&p, v), &|| format!("{p} {v}"));
        }
    }
    // Singleton extraction.
    for c in consts() {
        let sv = Value::coll([(Label::empty(), c.clone())]).unwrap();
        for p in patterns_below(&sv) {
            let pe = singleton_extract(&p);
            law("p.ε below", pe.as_ref().is_ok_and(|pe| matches(pe, &c)), &|| format!("{p}"));
            for c2 in consts() {
                if pe.as_ref().is_ok_and(|pe| equiv_at(pe, &c, &c2)) {
                    let sv2 = Value::coll([(Label::empty(), c2.clone())]).unwrap();
                    law("p.ε equivalence", equiv_at(&p, &sv, &sv2), &|| format!("{p} {c} {c2}"));
                }
            }
        }
    }
    // Label projection, binary union and restriction.
    for v1 in &sets {
        for ell in universe_labels().into_iter().filter(|k| !k.is_empty()) {
            let lv = prepend_label(&ell, v1.clone()).unwrap();
            for p in patterns_below(&lv) {
                let pl = label_project(&p, &ell);
                law("p[l] below", pl.as_ref().is_ok_and(|pl| matches(pl, v1)), &|| format!("{p}[{ell}]"));
                for w1 in &sets {
                    if pl.as_ref().is_ok_and(|pl| equiv_at(pl, v1, w1)) {
                        let lw = prepend_label(&ell, w1.clone()).unwrap();
                        law("p[l] equivalence", equiv_at(&p, &lv, &lw), &|| format!("{p} {v1} {w1}"));
                    }
                }
            }
        }
        for v2 in &sets {
            let u = disjoint_union(
                prepend_label(&one, v1.clone()).unwrap(),
                prepend_label(&two, v2.clone()).unwrap(),
            )
            .unwrap();
            for p in patterns_below(&u) {
                let (p1, p2) = (label_project(&p, &one), label_project(&p, &two));
                law(
                    "p[1], p[2] below",
                    p1.as_ref().is_ok_and(|x| matches(x, v1)) && p2.as_ref().is_ok_and(|x| matches(x, v2)),
                    &|| format!("{p}"),
                );
                let (Ok(p1), Ok(p2)) = (p1, p2) else { continue };
                // Restriction to the two halves.
                let r1 = restrict(&p, &[one.clone()]);
                let r2 = restrict(&p, &[two.clone()]);
                let u1 = prepend_label(&one, v1.clone()).unwrap();
                let u2 = prepend_label(&two, v2.clone()).unwrap();
                law(
                    "restriction below",
                    r1.is_ok_and(|r| matches(&r, &u1)) && r2.is_ok_and(|r| matches(&r, &u2)),
                    &|| format!("{p}"),
                );
                for w1 in &sets {
                    if !equiv_at(&p1, v1, w1) {
                        continue;
                    }
                    for w2 in &sets {
                        if equiv_at(&p2, v2, w2) {
                            let uw = disjoint_union(
                                prepend_label(&one, w1.clone()).unwrap(),
                                prepend_label(&two, w2.clone()).unwrap(),
                            )
                            .unwrap();
                            law("p[1], p[2] equivalence", equiv_at(&p, &u, &uw), &|| format!("{p} {uw}"));
                        }
                    }
                }
            }
        }
    }
    // Restriction with domains of the universe.
    for v in &sets {
        let m = v.as_coll().unwrap();
        let dom: Vec<Label> = m.keys().cloned().collect();
        for split in 0..=dom.len() {
            let (d1, d2) = dom.split_at(split);
            let part = |d: &[Label]| Value::coll(d.iter().map(|k| (k.clone(), m[k].clone()))).unwrap();
            let (v1, v2) = (part(d1), part(d2));
            for p in patterns_below(v) {
                law(
                    "restriction lemma",
                    restrict(&p, d1).is_ok_and(|r| matches(&r, &v1)) && restrict(&p, d2).is_ok_and(|r| matches(&r, &v2)),
                    &|| format!("{p} |{d1:?}"),
                );
            }
        }
    }
    // Union lemma: p1 ⊑ v1, p2 ⊑ v2 with disjoint domains.
    for v1 in &sets {
        for v2 in &sets {
            let Ok(u) = disjoint_union(v1.clone(), v2.clone()) else { continue };
            for p1 in patterns_below(v1) {
                for p2 in patterns_below(v2) {
                    let Ok(pu) = pattern_union(&p1, &p2) else {
                        law("pattern union defined", false, &|| format!("{p1} ⊎ {p2}"));
                        continue;
                    };
                    for w1 in sets.iter().filter(|w| equiv_at(&p1, v1, w)) {
                        for w2 in sets.iter().filter(|w| equiv_at(&p2, v2, w)) {
                            if let Ok(uw) = disjoint_union(w1.clone(), w2.clone()) {
                                law("union lemma", equiv_at(&pu, &u, &uw), &|| format!("{p1} ⊎ {p2} on {u}, {uw}"));
                            }
                        }
                    }
                }
            }
        }
    }

    let total: usize = counts.values().sum();
    o.checks += total;
    o.note(format!("{} laws, {total} instances", counts.len()));
    for (name, (n, example)) in violations {
        o.failed.push(format!("{name}: {n} violations, e.g. {example}"));
    }
}

// Criterion 6

fn replay_failures(o: &mut Outcome) {
    let (env, _) = tables(&["R"]);
    let q = query("q.nrc");
    let (v, t) = eval(&env, &q).unwrap();

    let mut r1_changed = env.clone();
    r1_changed.insert("R".into(), val("{[r1].<A:1,B:5,C:7>,[r2].<A:2,B:3,C:8>,[r3].<A:4,B:3,C:9>}"));
    o.eq(
        "r1.B changed replays",
        replay(&r1_changed, &t).map(|w| w.to_string()).unwrap_or_else(|e| e.to_string()),
        v.to_string(),
    );

    let mut r2_changed = env.clone();
    r2_changed.insert("R".into(), val("{[r1].<A:1,B:2,C:7>,[r2].<A:2,B:4,C:8>,[r3].<A:4,B:3,C:9>}"));
    let r = replay(&r2_changed, &t);
    o.check(format!("r2.B changed: {r:?}"), matches!(r, Err(Error::ControlFlowMismatch { .. })));

    let mut added = env.clone();
    added.insert(
        "R".into(),
        val("{[r1].<A:1,B:2,C:7>,[r2].<A:2,B:3,C:8>,[r3].<A:4,B:3,C:9>,[r4].<A:0,B:0,C:0>}"),
    );
    let r = replay(&added, &t);
    o.check(format!("row added: {r:?}"), matches!(r, Err(Error::MissingTraceLabel { .. })));

    let r = replay(&env, &Trace::Comp {
        body: match &*q {
            Expr::Comp { body, .. } => body.clone(),
            _ => unreachable!(),
        },
        var: "x".into(),
        source: Box::new(Trace::Var("R".into())),
        traces: theta(&t).unwrap().keys().map(|k| (k.clone(), Trace::Hole)).collect(),
    });
    o.check(format!("hole replayed: {r:?}"), matches!(r, Err(Error::HoleEncountered { .. })));

    let mut deleted = env.clone();
    deleted.insert("R".into(), val("{[r2].<A:2,B:3,C:8>}"));
    o.check("row deleted replays", replay(&deleted, &t).is_ok());
}

fn main() {
    let criteria: [(&str, fn(&mut Outcome)); 6] = [
        ("1 golden running example", golden),
        ("2 worked examples Q1-Q3", worked_examples),
        ("3 Q4 benchmark at n=50", q4_benchmark),
        ("4 property suite", properties),
        ("5 pattern algebra by enumeration", pattern_algebra),
        ("6 replay-failure taxonomy", replay_failures),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.to_lowercase().contains(&o.to_lowercase())) {
            continue;
        }
        let mut o = Outcome::default();
        let start = Instant::now();
        f(&mut o);
        let status = if o.failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {name}: {} checks in {:.2?}", o.checks, start.elapsed());
        for n in &o.notes {
            println!("     {n}");
        }
        for f in &o.failed {
            println!("     failed: {f}");
        }
        if !o.failed.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

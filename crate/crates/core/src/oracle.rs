//! Generators and perturbations used to test slices: random well-typed
//! queries and tables, patterns below a value, hole filling for trace and
//! query slices, and input variations that keep a pattern environment.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Expr, PrimOp, Type};
use crate::label::{Atom, Label};
use crate::pattern::{Pattern, PatternEnv, Tail};
use crate::table::Table;
use crate::trace::{Trace, TraceSet};
use crate::types::{typecheck_expr, typecheck_trace, TypeEnv};
use crate::value::{name, Const, Env, Name, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rec_type(fields: &[&str]) -> Type {
    Type::Record(fields.iter().map(|f| (name(f), Type::Int)).collect())
}

fn random_const(rng: &mut impl Rng, t: &Type) -> Value {
    match t {
        Type::Bool => Value::bool(rng.gen()),
        _ => Value::int(rng.gen_range(0..5)),
    }
}

/// A random value of type `t`, with at most `rows` elements per collection.
pub fn random_value(rng: &mut impl Rng, t: &Type, rows: usize) -> Value {
    match t {
        Type::Int | Type::Bool => random_const(rng, t),
        Type::Record(fs) => Value::Record(
            fs.iter()
                .map(|(k, ft)| (k.clone(), random_value(rng, ft, rows)))
                .collect(),
        ),
        Type::Set(et) => {
            let n = rng.gen_range(0..=rows);
            Value::Coll(
                (1..=n)
                    .map(|i| {
                        let l = Label::new(vec![Atom::name(&format!("e{i}")).expect("valid")]);
                        (l, random_value(rng, et, rows.min(2)))
                    })
                    .collect(),
            )
        }
    }
}

/// Tables `R: {<A,B,C>}`, `S: {<B,C>}` and `N: {int}` with up to `rows`
/// rows each and small integer entries.
pub fn random_tables(rng: &mut impl Rng, rows: usize) -> Vec<Table> {
    let mut make = |tname: &str, prefix: &str, schema: Type| {
        let n = rng.gen_range(0..=rows);
        let data = (1..=n)
            .map(|i| (format!("{prefix}{i}"), random_value(rng, &schema, 2)))
            .collect();
        Table::new(tname, schema, data).expect("generated table is valid")
    };
    vec![
        make("R", "r", rec_type(&["A", "B", "C"])),
        make("S", "s", rec_type(&["B", "C"])),
        make("N", "n", Type::Int),
    ]
}

/// Random well-typed query generator.
pub struct QueryGen<'r, R: Rng> {
    rng: &'r mut R,
    fresh: usize,
}

type Scope = Vec<(Name, Type)>;

impl<'r, R: Rng> QueryGen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        QueryGen { rng, fresh: 0 }
    }

    fn var(&mut self) -> Name {
        self.fresh += 1;
        name(&format!("v{}", self.fresh))
    }

    /// A query over the tables in `env`, of a randomly chosen result type.
    pub fn query(&mut self, env: &TypeEnv, depth: usize) -> Arc<Expr> {
        let scope: Scope = env.iter().map(|(k, t)| (k.clone(), t.clone())).collect();
        let target = match self.rng.gen_range(0..10) {
            0 => Type::Int,
            1 => Type::set(Type::Int),
            2 => rec_type(&["A", "B"]),
            _ => Type::set(rec_type(&["A", "B"])),
        };
        self.expr(&scope, &target, depth)
    }

    /// Variables and field projections of variables with type `t`.
    fn paths(scope: &Scope, t: &Type) -> Vec<Arc<Expr>> {
        let mut out = Vec::new();
        for (x, xt) in scope {
            if xt == t {
                out.push(Arc::new(Expr::Var(x.clone())));
            }
            if let Type::Record(fs) = xt {
                for (a, ft) in fs {
                    if ft == t {
                        out.push(Arc::new(Expr::Field(Arc::new(Expr::Var(x.clone())), a.clone())));
                    }
                }
            }
        }
        out
    }

    fn leaf(&mut self, scope: &Scope, t: &Type) -> Arc<Expr> {
        let paths = Self::paths(scope, t);
        if !paths.is_empty() && self.rng.gen_bool(0.7) {
            return paths.choose(self.rng).expect("non-empty").clone();
        }
        match t {
            Type::Int => Arc::new(Expr::Const(Const::Int(self.rng.gen_range(0..5)))),
            Type::Bool => Arc::new(Expr::Const(Const::Bool(self.rng.gen()))),
            Type::Record(fs) => Arc::new(Expr::Record(
                fs.iter().map(|(a, ft)| (a.clone(), self.leaf(scope, ft))).collect(),
            )),
            Type::Set(e) => Arc::new(Expr::Empty(Some((**e).clone()))),
        }
    }

    fn collection_types(scope: &Scope) -> Vec<Type> {
        let mut ts: Vec<Type> = scope
            .iter()
            .filter(|(_, t)| matches!(t, Type::Set(_)))
            .map(|(_, t)| t.clone())
            .collect();
        ts.sort();
        ts.dedup();
        ts
    }

    pub fn expr(&mut self, scope: &Scope, t: &Type, depth: usize) -> Arc<Expr> {
        if depth == 0 {
            return self.leaf(scope, t);
        }
        let d = depth - 1;
        let roll = self.rng.gen_range(0..100);
        if roll < 8 {
            let bt = if self.rng.gen_bool(0.5) {
                Type::Int
            } else {
                rec_type(&["A", "B"])
            };
            let e1 = self.expr(scope, &bt, d.min(2));
            let x = self.var();
            let mut inner = scope.clone();
            inner.push((x.clone(), bt));
            return Arc::new(Expr::Let(x, e1, self.expr(&inner, t, d)));
        }
        if roll < 16 {
            let c = self.expr(scope, &Type::Bool, d.min(2));
            return Arc::new(Expr::If(c, self.expr(scope, t, d), self.expr(scope, t, d)));
        }
        if roll < 28 {
            return self.leaf(scope, t);
        }
        match t {
            Type::Int => match self.rng.gen_range(0..4) {
                0 | 1 => {
                    let op = *[PrimOp::Add, PrimOp::Sub, PrimOp::Mul].choose(self.rng).expect("ops");
                    Arc::new(Expr::Prim(op, vec![self.expr(scope, t, d), self.expr(scope, t, d)]))
                }
                2 => Arc::new(Expr::Sum(self.expr(scope, &Type::set(Type::Int), d))),
                _ => self.leaf(scope, t),
            },
            Type::Bool => match self.rng.gen_range(0..5) {
                0..=2 => {
                    let op = *[PrimOp::Eq, PrimOp::Lt, PrimOp::Le, PrimOp::Ne, PrimOp::Gt]
                        .choose(self.rng)
                        .expect("ops");
                    Arc::new(Expr::Prim(op, vec![self.expr(scope, &Type::Int, d), self.expr(scope, &Type::Int, d)]))
                }
                3 => {
                    let op = *[PrimOp::And, PrimOp::Or].choose(self.rng).expect("ops");
                    Arc::new(Expr::Prim(op, vec![self.expr(scope, t, d), self.expr(scope, t, d)]))
                }
                _ => {
                    let st = Self::collection_types(scope)
                        .choose(self.rng)
                        .cloned()
                        .unwrap_or(Type::set(Type::Int));
                    Arc::new(Expr::IsEmpty(self.expr(scope, &st, d)))
                }
            },
            Type::Record(fs) => Arc::new(Expr::Record(
                fs.iter().map(|(a, ft)| (a.clone(), self.expr(scope, ft, d))).collect(),
            )),
            Type::Set(et) => match self.rng.gen_range(0..10) {
                0 | 1 => Arc::new(Expr::Singleton(self.expr(scope, et, d))),
                2 | 3 => Arc::new(Expr::Union(self.expr(scope, t, d), self.expr(scope, t, d))),
                _ => {
                    let mut sources = Self::collection_types(scope);
                    sources.push(Type::set(Type::Int));
                    let st = sources.choose(self.rng).expect("non-empty").clone();
                    let src = self.expr(scope, &st, d.min(1));
                    let Type::Set(elem) = st else { unreachable!() };
                    let x = self.var();
                    let mut inner = scope.clone();
                    inner.push((x.clone(), *elem));
                    let body = self.expr(&inner, t, d);
                    Arc::new(Expr::Comp { body, var: x, source: src })
                }
            },
        }
    }
}

/// A random pattern that `v` matches.
pub fn pattern_below(rng: &mut impl Rng, v: &Value) -> Pattern {
    let roll = rng.gen_range(0..10);
    if roll < 2 {
        return Pattern::Hole;
    }
    if roll < 3 {
        return Pattern::Diamond;
    }
    fn entries<K: Ord + Clone>(
        rng: &mut impl Rng,
        m: &BTreeMap<K, Value>,
    ) -> (BTreeMap<K, Pattern>, Tail) {
        let mut out = BTreeMap::new();
        for (k, x) in m {
            if rng.gen_bool(0.7) {
                out.insert(k.clone(), pattern_below(rng, x));
            }
        }
        let tail = if out.len() == m.len() && rng.gen_bool(0.5) {
            Tail::Closed
        } else if rng.gen_bool(0.7) {
            Tail::Hole
        } else {
            Tail::Diamond
        };
        (out, tail)
    }
    match v {
        Value::Const(c) => Pattern::Const(*c),
        Value::Record(fs) => {
            let (m, t) = entries(rng, fs);
            Pattern::Record(m, t)
        }
        Value::Coll(cs) => {
            let (m, t) = entries(rng, cs);
            Pattern::set(m, t)
        }
    }
}

/// A random pattern below `p` in the pattern order.
pub fn weaken(rng: &mut impl Rng, p: &Pattern) -> Pattern {
    if rng.gen_bool(0.15) {
        return Pattern::Hole;
    }
    fn entries<K: Ord + Clone>(
        rng: &mut impl Rng,
        m: &BTreeMap<K, Pattern>,
        t: Tail,
    ) -> (BTreeMap<K, Pattern>, Tail) {
        let mut out = BTreeMap::new();
        for (k, q) in m {
            if rng.gen_bool(0.8) {
                out.insert(k.clone(), weaken(rng, q));
            }
        }
        let tail = if out.len() < m.len() || (t != Tail::Hole && rng.gen_bool(0.2)) {
            Tail::Hole
        } else {
            t
        };
        (out, tail)
    }
    match p {
        Pattern::Record(m, t) => {
            let (m, t) = entries(rng, m, *t);
            Pattern::Record(m, t)
        }
        Pattern::Set(m, t) => {
            let (m, t) = entries(rng, m, *t);
            Pattern::set(m, t)
        }
        _ => p.clone(),
    }
}

fn fresh_label<V>(m: &BTreeMap<Label, V>, k: &mut usize) -> Option<Label> {
    if m.contains_key(&Label::empty()) {
        return None;
    }
    loop {
        *k += 1;
        let a = Atom::name(&format!("fresh{k}")).expect("valid");
        if !m.keys().any(|l| l.atoms().first() == Some(&a)) {
            return Some(Label::new(vec![a]));
        }
    }
}

struct Varier<'r, R: Rng> {
    rng: &'r mut R,
    fresh: usize,
}

impl<R: Rng> Varier<'_, R> {
    /// Arbitrary change of a value, keeping its type most of the time.
    fn randomize(&mut self, v: &Value) -> Value {
        match v {
            Value::Const(Const::Int(_)) => Value::int(self.rng.gen_range(0..5)),
            Value::Const(Const::Bool(_)) => Value::bool(self.rng.gen()),
            Value::Record(fs) => Value::Record(fs.iter().map(|(k, x)| (k.clone(), self.randomize(x))).collect()),
            Value::Coll(m) => {
                let mut out = BTreeMap::new();
                for (l, x) in m {
                    if !self.rng.gen_bool(0.2) {
                        out.insert(l.clone(), self.randomize(x));
                    }
                }
                self.maybe_add(m, &mut out, 0.3);
                Value::Coll(out)
            }
        }
    }

    fn maybe_add(&mut self, orig: &BTreeMap<Label, Value>, out: &mut BTreeMap<Label, Value>, prob: f64) {
        if orig.is_empty() || !self.rng.gen_bool(prob) {
            return;
        }
        let mut all = orig.clone();
        all.extend(out.iter().map(|(l, v)| (l.clone(), v.clone())));
        if let Some(l) = fresh_label(&all, &mut self.fresh) {
            let model = orig.values().nth(self.rng.gen_range(0..orig.len())).expect("non-empty");
            let v = self.randomize(model);
            out.insert(l, v);
        }
    }

    fn vary(&mut self, p: &Pattern, v: &Value) -> Value {
        match (p, v) {
            (Pattern::Hole, _) => self.randomize(v),
            (Pattern::Record(ps, tail), Value::Record(fs)) => {
                let mut out = BTreeMap::new();
                for (k, x) in fs {
                    match ps.get(k) {
                        Some(q) => {
                            out.insert(k.clone(), self.vary(q, x));
                        }
                        None if *tail == Tail::Hole => {
                            if !self.rng.gen_bool(0.05) {
                                out.insert(k.clone(), self.randomize(x));
                            }
                        }
                        None => {
                            out.insert(k.clone(), x.clone());
                        }
                    }
                }
                if *tail == Tail::Hole && self.rng.gen_bool(0.05) {
                    out.insert(name("Extra"), Value::int(self.rng.gen_range(0..5)));
                }
                Value::Record(out)
            }
            (Pattern::Set(ps, tail), Value::Coll(m)) => {
                let mut out = BTreeMap::new();
                for (l, x) in m {
                    match ps.get(l) {
                        Some(q) => {
                            out.insert(l.clone(), self.vary(q, x));
                        }
                        None if *tail == Tail::Hole => {
                            if !self.rng.gen_bool(0.25) {
                                out.insert(l.clone(), self.randomize(x));
                            }
                        }
                        None => {
                            out.insert(l.clone(), x.clone());
                        }
                    }
                }
                if *tail == Tail::Hole {
                    self.maybe_add(m, &mut out, 0.3);
                }
                Value::Coll(out)
            }
            _ => v.clone(),
        }
    }
}

/// A random input that agrees with `env` wherever `rho` asks for it:
/// `□`-covered parts are changed, deleted or extended, and `◇` and
/// constant parts are kept.
pub fn vary_env(env: &Env, rho: &PatternEnv, seed: u64) -> Env {
    let mut r = rng(seed);
    vary_env_with(&mut r, env, rho)
}

pub fn vary_env_with(rng: &mut impl Rng, env: &Env, rho: &PatternEnv) -> Env {
    let mut v = Varier { rng, fresh: 0 };
    env.iter()
        .map(|(x, val)| (x.clone(), v.vary(&rho.get(x), val)))
        .collect()
}

fn bind(ctx: &TypeEnv, x: &Name, t: Type) -> TypeEnv {
    let mut c = ctx.clone();
    c.insert(x.clone(), t);
    c
}

fn elem_type(t: Option<Type>) -> Option<Type> {
    match t {
        Some(Type::Set(e)) => Some(*e),
        _ => None,
    }
}

struct Filler<'r, R: Rng> {
    rng: &'r mut R,
}

impl<R: Rng> Filler<'_, R> {
    /// A small trace of type `t` that replays without failing.
    fn random_trace(&mut self, ctx: &TypeEnv, t: &Type, depth: usize) -> Trace {
        let vars: Vec<&Name> = ctx.iter().filter(|(_, xt)| *xt == t).map(|(x, _)| x).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.3) {
            return Trace::Var((*vars.choose(self.rng).expect("non-empty")).clone());
        }
        let deeper = depth > 0 && self.rng.gen_bool(0.5);
        match t {
            Type::Int if deeper => Trace::Prim(
                PrimOp::Add,
                vec![self.random_trace(ctx, t, depth - 1), self.random_trace(ctx, t, depth - 1)],
            ),
            Type::Int => Trace::Const(Const::Int(self.rng.gen_range(0..5))),
            Type::Bool if deeper => Trace::Prim(
                PrimOp::Lt,
                vec![
                    self.random_trace(ctx, &Type::Int, depth - 1),
                    self.random_trace(ctx, &Type::Int, depth - 1),
                ],
            ),
            Type::Bool => Trace::Const(Const::Bool(self.rng.gen())),
            Type::Record(fs) => Trace::Record(
                fs.iter()
                    .map(|(a, ft)| (a.clone(), self.random_trace(ctx, ft, depth.saturating_sub(1))))
                    .collect(),
            ),
            Type::Set(et) => match (deeper, self.rng.gen_range(0..3)) {
                (true, 0) => Trace::Union(
                    Box::new(self.random_trace(ctx, t, depth - 1)),
                    Box::new(self.random_trace(ctx, t, depth - 1)),
                ),
                (_, 1) => Trace::Singleton(Box::new(self.random_trace(ctx, et, depth.saturating_sub(1)))),
                _ => Trace::Empty(Some((**et).clone())),
            },
        }
    }

    fn hole(&mut self, ctx: &TypeEnv, reference: &Trace) -> Trace {
        if self.rng.gen_bool(0.5) {
            return reference.clone();
        }
        match typecheck_trace(ctx, reference) {
            Ok(t) => self.random_trace(ctx, &t, 2),
            Err(_) => reference.clone(),
        }
    }

    fn fill(&mut self, s: &Trace, t: &Trace, ctx: &TypeEnv) -> Trace {
        if matches!(s, Trace::Hole) {
            return self.hole(ctx, t);
        }
        match (s, t) {
            (Trace::Prim(op, xs), Trace::Prim(_, ys)) => {
                Trace::Prim(*op, xs.iter().zip(ys).map(|(x, y)| self.fill(x, y, ctx)).collect())
            }
            (Trace::Let(x, s1, s2), Trace::Let(_, t1, t2)) => {
                let a = self.fill(s1, t1, ctx);
                let inner = match typecheck_trace(ctx, t1) {
                    Ok(ty) => bind(ctx, x, ty),
                    Err(_) => ctx.clone(),
                };
                Trace::Let(x.clone(), Box::new(a), Box::new(self.fill(s2, t2, &inner)))
            }
            (Trace::Record(fs), Trace::Record(gs)) => Trace::Record(
                fs.iter()
                    .zip(gs)
                    .map(|((a, x), (_, y))| (a.clone(), self.fill(x, y, ctx)))
                    .collect(),
            ),
            (Trace::Field(x, a), Trace::Field(y, _)) => Trace::Field(Box::new(self.fill(x, y, ctx)), a.clone()),
            (
                Trace::If {
                    test,
                    then_expr,
                    else_expr,
                    taken,
                    branch,
                },
                Trace::If {
                    test: t2, branch: b2, ..
                },
            ) => Trace::If {
                test: Box::new(self.fill(test, t2, ctx)),
                then_expr: then_expr.clone(),
                else_expr: else_expr.clone(),
                taken: *taken,
                branch: Box::new(self.fill(branch, b2, ctx)),
            },
            (Trace::Singleton(x), Trace::Singleton(y)) => Trace::Singleton(Box::new(self.fill(x, y, ctx))),
            (Trace::Sum(x), Trace::Sum(y)) => Trace::Sum(Box::new(self.fill(x, y, ctx))),
            (Trace::IsEmpty(x), Trace::IsEmpty(y)) => Trace::IsEmpty(Box::new(self.fill(x, y, ctx))),
            (Trace::Union(a1, b1), Trace::Union(a2, b2)) => Trace::Union(
                Box::new(self.fill(a1, a2, ctx)),
                Box::new(self.fill(b1, b2, ctx)),
            ),
            (
                Trace::Comp {
                    body,
                    var,
                    source,
                    traces,
                },
                Trace::Comp {
                    source: src2,
                    traces: th2,
                    ..
                },
            ) => {
                let inner = match elem_type(typecheck_trace(ctx, src2).ok()) {
                    Some(et) => bind(ctx, var, et),
                    None => ctx.clone(),
                };
                let mut out = TraceSet::new();
                for (l, ti) in th2 {
                    let filled = match traces.get(l) {
                        Some(si) => self.fill(si, ti, &inner),
                        None => self.hole(&inner, ti),
                    };
                    out.insert(l.clone(), filled);
                }
                Trace::Comp {
                    body: body.clone(),
                    var: var.clone(),
                    source: Box::new(self.fill(source, src2, ctx)),
                    traces: out,
                }
            }
            _ => s.clone(),
        }
    }

    fn hole_expr(&mut self, ctx: &TypeEnv, reference: &Arc<Expr>) -> Arc<Expr> {
        if self.rng.gen_bool(0.5) {
            return reference.clone();
        }
        match typecheck_expr(ctx, reference) {
            Ok(t) => {
                let scope: Scope = ctx.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
                let mut g = QueryGen::new(&mut *self.rng);
                g.fresh = 1000;
                g.expr(&scope, &t, 2)
            }
            Err(_) => reference.clone(),
        }
    }

    fn fill_expr(&mut self, s: &Arc<Expr>, e: &Arc<Expr>, ctx: &TypeEnv) -> Arc<Expr> {
        if matches!(**s, Expr::Hole) {
            return self.hole_expr(ctx, e);
        }
        Arc::new(match (&**s, &**e) {
            (Expr::Prim(op, xs), Expr::Prim(_, ys)) => {
                Expr::Prim(*op, xs.iter().zip(ys).map(|(x, y)| self.fill_expr(x, y, ctx)).collect())
            }
            (Expr::Let(x, s1, s2), Expr::Let(_, e1, e2)) => {
                let a = self.fill_expr(s1, e1, ctx);
                let inner = match typecheck_expr(ctx, e1) {
                    Ok(t) => bind(ctx, x, t),
                    Err(_) => ctx.clone(),
                };
                Expr::Let(x.clone(), a, self.fill_expr(s2, e2, &inner))
            }
            (Expr::Record(fs), Expr::Record(gs)) => Expr::Record(
                fs.iter()
                    .zip(gs)
                    .map(|((a, x), (_, y))| (a.clone(), self.fill_expr(x, y, ctx)))
                    .collect(),
            ),
            (Expr::Field(x, a), Expr::Field(y, _)) => Expr::Field(self.fill_expr(x, y, ctx), a.clone()),
            (Expr::If(c1, a1, b1), Expr::If(c2, a2, b2)) => Expr::If(
                self.fill_expr(c1, c2, ctx),
                self.fill_expr(a1, a2, ctx),
                self.fill_expr(b1, b2, ctx),
            ),
            (Expr::Singleton(x), Expr::Singleton(y)) => Expr::Singleton(self.fill_expr(x, y, ctx)),
            (Expr::Sum(x), Expr::Sum(y)) => Expr::Sum(self.fill_expr(x, y, ctx)),
            (Expr::IsEmpty(x), Expr::IsEmpty(y)) => Expr::IsEmpty(self.fill_expr(x, y, ctx)),
            (Expr::Union(a1, b1), Expr::Union(a2, b2)) => {
                Expr::Union(self.fill_expr(a1, a2, ctx), self.fill_expr(b1, b2, ctx))
            }
            (
                Expr::Comp { body, var, source },
                Expr::Comp {
                    body: b2, source: s2, ..
                },
            ) => {
                let inner = match elem_type(typecheck_expr(ctx, s2).ok()) {
                    Some(et) => bind(ctx, var, et),
                    None => ctx.clone(),
                };
                Expr::Comp {
                    body: self.fill_expr(body, b2, &inner),
                    var: var.clone(),
                    source: self.fill_expr(source, s2, ctx),
                }
            }
            _ => return s.clone(),
        })
    }
}

/// A random hole-free trace above the slice `s`: each hole becomes either
/// the corresponding part of `reference` or a small random trace of the
/// same type, and missing comprehension entries are taken or invented the
/// same way. `ctx` types the free variables of `reference`.
pub fn fill_holes(s: &Trace, reference: &Trace, ctx: &TypeEnv, seed: u64) -> Trace {
    let mut r = rng(seed);
    fill_holes_with(&mut r, s, reference, ctx)
}

pub fn fill_holes_with(rng: &mut impl Rng, s: &Trace, reference: &Trace, ctx: &TypeEnv) -> Trace {
    Filler { rng }.fill(s, reference, ctx)
}

/// Query analogue of [`fill_holes`]: holes of the query slice `s` become
/// the corresponding part of `reference` or a random expression of the
/// same type.
pub fn fill_expr_holes(s: &Arc<Expr>, reference: &Arc<Expr>, ctx: &TypeEnv, seed: u64) -> Arc<Expr> {
    let mut r = rng(seed);
    fill_expr_holes_with(&mut r, s, reference, ctx)
}

pub fn fill_expr_holes_with(
    rng: &mut impl Rng,
    s: &Arc<Expr>,
    reference: &Arc<Expr>,
    ctx: &TypeEnv,
) -> Arc<Expr> {
    Filler { rng }.fill_expr(s, reference, ctx)
}

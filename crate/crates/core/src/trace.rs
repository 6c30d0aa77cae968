use std::collections::BTreeMap;
use std::sync::Arc;

use crate::expr::{Expr, PrimOp, Type};
use crate::label::Label;
use crate::value::{Const, Name};

/// Θ: one trace per element label of a comprehension source.
pub type TraceSet = BTreeMap<Label, Trace>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Trace {
    Const(Const),
    Prim(PrimOp, Vec<Trace>),
    Var(Name),
    Let(Name, Box<Trace>, Box<Trace>),
    Record(Vec<(Name, Trace)>),
    Field(Box<Trace>, Name),
    /// Conditional that took the `taken` branch; both branch expressions kept.
    If {
        test: Box<Trace>,
        then_expr: Arc<Expr>,
        else_expr: Arc<Expr>,
        taken: bool,
        branch: Box<Trace>,
    },
    Empty(Option<Type>),
    Singleton(Box<Trace>),
    Union(Box<Trace>, Box<Trace>),
    Comp {
        body: Arc<Expr>,
        var: Name,
        source: Box<Trace>,
        traces: TraceSet,
    },
    Sum(Box<Trace>),
    IsEmpty(Box<Trace>),
    Hole,
}

impl Trace {
    /// Node count, including the nodes of stored expressions.
    pub fn size(&self) -> usize {
        match self {
            Trace::Const(_) | Trace::Var(_) | Trace::Empty(_) | Trace::Hole => 1,
            Trace::Prim(_, args) => 1 + args.iter().map(Trace::size).sum::<usize>(),
            Trace::Let(_, a, b) | Trace::Union(a, b) => 1 + a.size() + b.size(),
            Trace::Record(fs) => 1 + fs.iter().map(|(_, t)| t.size()).sum::<usize>(),
            Trace::Field(t, _) | Trace::Singleton(t) | Trace::Sum(t) | Trace::IsEmpty(t) => 1 + t.size(),
            Trace::If {
                test,
                then_expr,
                else_expr,
                branch,
                ..
            } => 1 + test.size() + then_expr.size() + else_expr.size() + branch.size(),
            Trace::Comp {
                body,
                source,
                traces,
                ..
            } => 1 + body.size() + source.size() + traces.values().map(Trace::size).sum::<usize>(),
        }
    }

    pub fn has_holes(&self) -> bool {
        match self {
            Trace::Hole => true,
            Trace::Const(_) | Trace::Var(_) | Trace::Empty(_) => false,
            Trace::Prim(_, args) => args.iter().any(Trace::has_holes),
            Trace::Let(_, a, b) | Trace::Union(a, b) => a.has_holes() || b.has_holes(),
            Trace::Record(fs) => fs.iter().any(|(_, t)| t.has_holes()),
            Trace::Field(t, _) | Trace::Singleton(t) | Trace::Sum(t) | Trace::IsEmpty(t) => t.has_holes(),
            Trace::If { test, branch, .. } => test.has_holes() || branch.has_holes(),
            Trace::Comp { source, traces, .. } => source.has_holes() || traces.values().any(Trace::has_holes),
        }
    }
}

/// `T ⊑ U`: `t` is `u` with some subtraces replaced by holes and some Θ
/// entries dropped.
pub fn is_subtrace(t: &Trace, u: &Trace) -> bool {
    match (t, u) {
        (Trace::Hole, _) => true,
        (Trace::Const(a), Trace::Const(b)) => a == b,
        (Trace::Prim(f, xs), Trace::Prim(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| is_subtrace(x, y))
        }
        (Trace::Var(x), Trace::Var(y)) => x == y,
        (Trace::Let(x, a1, b1), Trace::Let(y, a2, b2)) => {
            x == y && is_subtrace(a1, a2) && is_subtrace(b1, b2)
        }
        (Trace::Record(fs), Trace::Record(gs)) => {
            fs.len() == gs.len()
                && fs
                    .iter()
                    .zip(gs)
                    .all(|((a, x), (b, y))| a == b && is_subtrace(x, y))
        }
        (Trace::Field(a, f), Trace::Field(b, g)) => f == g && is_subtrace(a, b),
        (
            Trace::If {
                test: t1,
                then_expr: e1,
                else_expr: f1,
                taken: k1,
                branch: b1,
            },
            Trace::If {
                test: t2,
                then_expr: e2,
                else_expr: f2,
                taken: k2,
                branch: b2,
            },
        ) => k1 == k2 && e1 == e2 && f1 == f2 && is_subtrace(t1, t2) && is_subtrace(b1, b2),
        (Trace::Empty(a), Trace::Empty(b)) => a == b,
        (Trace::Singleton(a), Trace::Singleton(b))
        | (Trace::Sum(a), Trace::Sum(b))
        | (Trace::IsEmpty(a), Trace::IsEmpty(b)) => is_subtrace(a, b),
        (Trace::Union(a1, b1), Trace::Union(a2, b2)) => is_subtrace(a1, a2) && is_subtrace(b1, b2),
        (
            Trace::Comp {
                body: e1,
                var: x1,
                source: s1,
                traces: th1,
            },
            Trace::Comp {
                body: e2,
                var: x2,
                source: s2,
                traces: th2,
            },
        ) => {
            e1 == e2
                && x1 == x2
                && is_subtrace(s1, s2)
                && th1
                    .iter()
                    .all(|(l, t)| th2.get(l).is_some_and(|u| is_subtrace(t, u)))
        }
        _ => false,
    }
}

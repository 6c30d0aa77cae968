use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::label::Label;
use crate::pattern::{
    absorb_env, field_project, label_project, leq, singleton_extract, Pattern, PatternEnv, Tail,
};
use crate::slice::{slice, split_by_labels};
use crate::trace::{Trace, TraceSet};
use crate::value::Const;

/// `e ⊔ e'` on partial expressions: fills the holes of each from the other.
pub fn lub_expr(a: &Arc<Expr>, b: &Arc<Expr>) -> Result<Arc<Expr>> {
    if Arc::ptr_eq(a, b) {
        return Ok(a.clone());
    }
    let both = |x: &Arc<Expr>, y: &Arc<Expr>| lub_expr(x, y);
    Ok(match (&**a, &**b) {
        (Expr::Hole, _) => b.clone(),
        (_, Expr::Hole) => a.clone(),
        (Expr::Const(x), Expr::Const(y)) if x == y => a.clone(),
        (Expr::Var(x), Expr::Var(y)) if x == y => a.clone(),
        (Expr::Empty(x), Expr::Empty(y)) if x == y => a.clone(),
        (Expr::Prim(f, xs), Expr::Prim(g, ys)) if f == g && xs.len() == ys.len() => Arc::new(Expr::Prim(
            *f,
            xs.iter().zip(ys).map(|(x, y)| both(x, y)).collect::<Result<_>>()?,
        )),
        (Expr::Let(x, a1, b1), Expr::Let(y, a2, b2)) if x == y => {
            Arc::new(Expr::Let(x.clone(), both(a1, a2)?, both(b1, b2)?))
        }
        (Expr::Record(fs), Expr::Record(gs))
            if fs.len() == gs.len() && fs.iter().zip(gs).all(|((a, _), (b, _))| a == b) =>
        {
            Arc::new(Expr::Record(
                fs.iter()
                    .zip(gs)
                    .map(|((k, x), (_, y))| Ok((k.clone(), both(x, y)?)))
                    .collect::<Result<_>>()?,
            ))
        }
        (Expr::Field(x, f), Expr::Field(y, g)) if f == g => Arc::new(Expr::Field(both(x, y)?, f.clone())),
        (Expr::If(c1, a1, b1), Expr::If(c2, a2, b2)) => {
            Arc::new(Expr::If(both(c1, c2)?, both(a1, a2)?, both(b1, b2)?))
        }
        (Expr::Singleton(x), Expr::Singleton(y)) => Arc::new(Expr::Singleton(both(x, y)?)),
        (Expr::Sum(x), Expr::Sum(y)) => Arc::new(Expr::Sum(both(x, y)?)),
        (Expr::IsEmpty(x), Expr::IsEmpty(y)) => Arc::new(Expr::IsEmpty(both(x, y)?)),
        (Expr::Union(a1, b1), Expr::Union(a2, b2)) => Arc::new(Expr::Union(both(a1, a2)?, both(b1, b2)?)),
        (
            Expr::Comp {
                body: e1,
                var: x1,
                source: s1,
            },
            Expr::Comp {
                body: e2,
                var: x2,
                source: s2,
            },
        ) if x1 == x2 => Arc::new(Expr::Comp {
            body: both(e1, e2)?,
            var: x1.clone(),
            source: both(s1, s2)?,
        }),
        _ => return Err(Error::Incompatible),
    })
}

/// `e ⊑ e'`: `e` is `e'` with some subexpressions replaced by holes.
pub fn leq_expr(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Hole, _) => true,
        (Expr::Const(x), Expr::Const(y)) => x == y,
        (Expr::Var(x), Expr::Var(y)) => x == y,
        (Expr::Empty(x), Expr::Empty(y)) => x == y,
        (Expr::Prim(f, xs), Expr::Prim(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| leq_expr(x, y))
        }
        (Expr::Let(x, a1, b1), Expr::Let(y, a2, b2)) => x == y && leq_expr(a1, a2) && leq_expr(b1, b2),
        (Expr::Record(fs), Expr::Record(gs)) => {
            fs.len() == gs.len()
                && fs
                    .iter()
                    .zip(gs)
                    .all(|((k, x), (l, y))| k == l && leq_expr(x, y))
        }
        (Expr::Field(x, f), Expr::Field(y, g)) => f == g && leq_expr(x, y),
        (Expr::If(c1, a1, b1), Expr::If(c2, a2, b2)) => {
            leq_expr(c1, c2) && leq_expr(a1, a2) && leq_expr(b1, b2)
        }
        (Expr::Singleton(x), Expr::Singleton(y))
        | (Expr::Sum(x), Expr::Sum(y))
        | (Expr::IsEmpty(x), Expr::IsEmpty(y)) => leq_expr(x, y),
        (Expr::Union(a1, b1), Expr::Union(a2, b2)) => leq_expr(a1, a2) && leq_expr(b1, b2),
        (
            Expr::Comp {
                body: e1,
                var: x1,
                source: s1,
            },
            Expr::Comp {
                body: e2,
                var: x2,
                source: s2,
            },
        ) => x1 == x2 && leq_expr(e1, e2) && leq_expr(s1, s2),
        _ => false,
    }
}

fn hole() -> Arc<Expr> {
    Arc::new(Expr::Hole)
}

/// Query slice: the input pattern ρ and the part of the query needed to
/// recompute the part of the output described by `p`, whatever happens in
/// the dropped parts.
pub fn query_slice(p: &Pattern, t: &Trace) -> Result<(PatternEnv, Arc<Expr>)> {
    if *p == Pattern::Hole {
        return Ok((PatternEnv::new(), hole()));
    }
    Ok(match t {
        Trace::Hole => {
            return Err(Error::PatternMismatch(format!("hole trace cannot produce {p}")))
        }
        Trace::Const(c) => {
            if !matches!(p, Pattern::Diamond) && *p != Pattern::Const(*c) {
                return Err(Error::PatternMismatch(format!("constant {c} against {p}")));
            }
            (PatternEnv::new(), Arc::new(Expr::Const(*c)))
        }
        Trace::Prim(op, args) => {
            let mut rho = PatternEnv::new();
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                let (r, e) = query_slice(&Pattern::Diamond, a)?;
                absorb_env(&mut rho, r)?;
                out.push(e);
            }
            (rho, Arc::new(Expr::Prim(*op, out)))
        }
        Trace::Var(x) => (PatternEnv::singleton(x.clone(), p.clone()), Arc::new(Expr::Var(x.clone()))),
        Trace::Let(x, t1, t2) => {
            let (mut rho2, e2) = query_slice(p, t2)?;
            let p1 = rho2.take(x);
            let (rho1, e1) = query_slice(&p1, t1)?;
            absorb_env(&mut rho2, rho1)?;
            (rho2, Arc::new(Expr::Let(x.clone(), e1, e2)))
        }
        Trace::Record(fs) => {
            if let Pattern::Record(ps, _) = p {
                if let Some(a) = ps.keys().find(|a| !fs.iter().any(|(b, _)| b == *a)) {
                    return Err(Error::PatternMismatch(format!("record has no field {a}")));
                }
            }
            let mut rho = PatternEnv::new();
            let mut out = Vec::with_capacity(fs.len());
            for (a, ft) in fs {
                let (r, e) = query_slice(&field_project(p, a)?, ft)?;
                absorb_env(&mut rho, r)?;
                out.push((a.clone(), e));
            }
            (rho, Arc::new(Expr::Record(out)))
        }
        Trace::Field(t1, a) => {
            let q = Pattern::Record([(a.clone(), p.clone())].into_iter().collect(), Tail::Hole);
            let (rho, e) = query_slice(&q, t1)?;
            (rho, Arc::new(Expr::Field(e, a.clone())))
        }
        Trace::If {
            test, taken, branch, ..
        } => {
            let (mut rho, eb) = query_slice(p, branch)?;
            let (rt, et) = query_slice(&Pattern::Const(Const::Bool(*taken)), test)?;
            absorb_env(&mut rho, rt)?;
            let e = if *taken {
                Expr::If(et, eb, hole())
            } else {
                Expr::If(et, hole(), eb)
            };
            (rho, Arc::new(e))
        }
        Trace::Empty(ty) => {
            if !matches!(p, Pattern::Diamond) && *p != Pattern::empty_set() {
                return Err(Error::PatternMismatch(format!("empty collection against {p}")));
            }
            (PatternEnv::new(), Arc::new(Expr::Empty(ty.clone())))
        }
        Trace::Singleton(t1) => {
            let (rho, e) = query_slice(&singleton_extract(p)?, t1)?;
            (rho, Arc::new(Expr::Singleton(e)))
        }
        Trace::Union(t1, t2) => {
            let (mut rho, e1) = query_slice(&label_project(p, &Label::nat(1))?, t1)?;
            let (r2, e2) = query_slice(&label_project(p, &Label::nat(2))?, t2)?;
            absorb_env(&mut rho, r2)?;
            (rho, Arc::new(Expr::Union(e1, e2)))
        }
        Trace::Comp {
            var, source, traces, ..
        } => {
            let (mut rho, body, p0) = query_slice_set(p, var, traces)?;
            let (r0, e0) = query_slice(&p0, source)?;
            absorb_env(&mut rho, r0)?;
            (
                rho,
                Arc::new(Expr::Comp {
                    body,
                    var: var.clone(),
                    source: e0,
                }),
            )
        }
        Trace::Sum(t1) => {
            let (rho, e) = query_slice(&Pattern::Diamond, t1)?;
            (rho, Arc::new(Expr::Sum(e)))
        }
        Trace::IsEmpty(t1) => {
            let (rho, e) = query_slice(&Pattern::Diamond, t1)?;
            (rho, Arc::new(Expr::IsEmpty(e)))
        }
    })
}

/// Query-slices every element trace of a comprehension over `x` and merges
/// the resulting bodies. Returns ρ without `x`, the body, and the source pattern.
pub fn query_slice_set(p: &Pattern, x: &str, theta: &TraceSet) -> Result<(PatternEnv, Arc<Expr>, Pattern)> {
    if *p == Pattern::Hole {
        return Ok((PatternEnv::new(), hole(), Pattern::Hole));
    }
    if theta.is_empty() {
        return match p {
            Pattern::Diamond => Ok((PatternEnv::new(), hole(), Pattern::empty_set())),
            Pattern::Set(m, _) if m.is_empty() => Ok((PatternEnv::new(), hole(), Pattern::empty_set())),
            _ => Err(Error::PatternMismatch(format!("empty comprehension against {p}"))),
        };
    }
    let mut rho = PatternEnv::new();
    let mut body = hole();
    let mut elems = std::collections::BTreeMap::new();
    // Unlisted elements are free under a □ tail, so rows outside the
    // pattern may come and go; otherwise the source keeps exactly its rows.
    let source_tail = match p {
        Pattern::Set(_, Tail::Hole) => Tail::Hole,
        _ => Tail::Closed,
    };
    for (l, t, q) in split_by_labels(p, theta)? {
        let Some(q) = q else { continue };
        let (mut r, e) = query_slice(&q, t)?;
        let px = r.take(x);
        absorb_env(&mut rho, r)?;
        body = lub_expr(&body, &e)?;
        elems.insert(l.clone(), px);
    }
    Ok((rho, body, Pattern::set(elems, source_tail)))
}

/// Differential query slice: the query slices for `inner` and `outer`,
/// the inner one computed from the outer trace slice.
pub fn diff_query_slice(
    inner: &Pattern,
    outer: &Pattern,
    t: &Trace,
) -> Result<((PatternEnv, Arc<Expr>), (PatternEnv, Arc<Expr>))> {
    if !leq(inner, outer) {
        return Err(Error::NotNested);
    }
    let outer_q = query_slice(outer, t)?;
    let (_, s2) = slice(outer, t)?;
    let inner_q = query_slice(inner, &s2)?;
    Ok((inner_q, outer_q))
}

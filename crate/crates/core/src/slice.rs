use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::label::{prefix_key, Label};
use crate::pattern::{
    absorb_env, field_project, label_project, leq, singleton_extract, Pattern, PatternEnv, Tail,
};
use crate::trace::{Trace, TraceSet};
use crate::value::Const;

/// Splits a collection pattern along the labels of Θ. Each Θ label gets the
/// pattern for its own elements (`p|{ℓ}` projected on `ℓ`), with `None`
/// when that restriction is `□`.
pub(crate) fn split_by_labels<'a, T>(
    p: &Pattern,
    theta: &'a BTreeMap<Label, T>,
) -> Result<Vec<(&'a Label, &'a T, Option<Pattern>)>> {
    let (elems, tail) = match p {
        Pattern::Diamond => (BTreeMap::new(), Tail::Diamond),
        Pattern::Set(m, t) => (m.clone(), *t),
        _ => return Err(Error::Shape("comprehension sliced with a non-collection pattern".into())),
    };
    let mut groups: BTreeMap<&Label, BTreeMap<Label, Pattern>> = BTreeMap::new();
    for (l, q) in elems {
        let k = prefix_key(theta, &l).ok_or_else(|| {
            Error::PatternMismatch(format!("pattern asks for label {l}, which the comprehension did not produce"))
        })?;
        let rest = k.strip_from(&l).expect("prefix");
        groups.entry(k).or_default().insert(rest, q);
    }
    Ok(theta
        .iter()
        .map(|(l, t)| {
            let part = match groups.remove(l) {
                Some(m) => Some(Pattern::set(m, tail)),
                None if tail == Tail::Hole => None,
                None => Some(Pattern::set(BTreeMap::new(), tail)),
            };
            (l, t, part)
        })
        .collect())
}

/// Backward slice of trace `t` for output pattern `p`: the input pattern ρ
/// and the part of the trace needed to recompute that much of the output.
pub fn slice(p: &Pattern, t: &Trace) -> Result<(PatternEnv, Trace)> {
    if *p == Pattern::Hole {
        return Ok((PatternEnv::new(), Trace::Hole));
    }
    Ok(match t {
        Trace::Hole => {
            return Err(Error::PatternMismatch(format!(
                "hole trace cannot produce {p}"
            )))
        }
        Trace::Const(c) => {
            if !matches!(p, Pattern::Diamond) && *p != Pattern::Const(*c) {
                return Err(Error::PatternMismatch(format!("constant {c} against {p}")));
            }
            (PatternEnv::new(), Trace::Const(*c))
        }
        Trace::Prim(op, args) => {
            let mut rho = PatternEnv::new();
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                let (r, s) = slice(&Pattern::Diamond, a)?;
                absorb_env(&mut rho, r)?;
                out.push(s);
            }
            (rho, Trace::Prim(*op, out))
        }
        Trace::Var(x) => (PatternEnv::singleton(x.clone(), p.clone()), Trace::Var(x.clone())),
        Trace::Let(x, t1, t2) => {
            let (mut rho2, s2) = slice(p, t2)?;
            let p1 = rho2.take(x);
            let (rho1, s1) = slice(&p1, t1)?;
            absorb_env(&mut rho2, rho1)?;
            (rho2, Trace::Let(x.clone(), Box::new(s1), Box::new(s2)))
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
                let (r, s) = slice(&field_project(p, a)?, ft)?;
                absorb_env(&mut rho, r)?;
                out.push((a.clone(), s));
            }
            (rho, Trace::Record(out))
        }
        Trace::Field(t1, a) => {
            let q = Pattern::Record([(a.clone(), p.clone())].into_iter().collect(), Tail::Hole);
            let (rho, s) = slice(&q, t1)?;
            (rho, Trace::Field(Box::new(s), a.clone()))
        }
        Trace::If {
            test,
            then_expr,
            else_expr,
            taken,
            branch,
        } => {
            let (mut rho, sb) = slice(p, branch)?;
            let (rt, st) = slice(&Pattern::Const(Const::Bool(*taken)), test)?;
            absorb_env(&mut rho, rt)?;
            (
                rho,
                Trace::If {
                    test: Box::new(st),
                    then_expr: then_expr.clone(),
                    else_expr: else_expr.clone(),
                    taken: *taken,
                    branch: Box::new(sb),
                },
            )
        }
        Trace::Empty(ty) => {
            if !matches!(p, Pattern::Diamond) && *p != Pattern::empty_set() {
                return Err(Error::PatternMismatch(format!("empty collection against {p}")));
            }
            (PatternEnv::new(), Trace::Empty(ty.clone()))
        }
        Trace::Singleton(t1) => {
            let (rho, s) = slice(&singleton_extract(p)?, t1)?;
            (rho, Trace::Singleton(Box::new(s)))
        }
        Trace::Union(t1, t2) => {
            let (mut rho, s1) = slice(&label_project(p, &Label::nat(1))?, t1)?;
            let (r2, s2) = slice(&label_project(p, &Label::nat(2))?, t2)?;
            absorb_env(&mut rho, r2)?;
            (rho, Trace::Union(Box::new(s1), Box::new(s2)))
        }
        Trace::Comp {
            body,
            var,
            source,
            traces,
        } => {
            let (mut rho, kept, p0) = slice_trace_set(p, var, traces)?;
            let (r0, s0) = slice(&p0, source)?;
            absorb_env(&mut rho, r0)?;
            (
                rho,
                Trace::Comp {
                    body: body.clone(),
                    var: var.clone(),
                    source: Box::new(s0),
                    traces: kept,
                },
            )
        }
        Trace::Sum(t1) => {
            let (rho, s) = slice(&Pattern::Diamond, t1)?;
            (rho, Trace::Sum(Box::new(s)))
        }
        Trace::IsEmpty(t1) => {
            let (rho, s) = slice(&Pattern::Diamond, t1)?;
            (rho, Trace::IsEmpty(Box::new(s)))
        }
    })
}

/// Slices the per-element traces of a comprehension over variable `x`.
/// Returns the environment pattern without `x`, the kept traces, and the
/// pattern the comprehension source must satisfy.
pub fn slice_trace_set(p: &Pattern, x: &str, theta: &TraceSet) -> Result<(PatternEnv, TraceSet, Pattern)> {
    if *p == Pattern::Hole {
        return Ok((PatternEnv::new(), TraceSet::new(), Pattern::Hole));
    }
    if theta.is_empty() {
        return match p {
            Pattern::Diamond => Ok((PatternEnv::new(), TraceSet::new(), Pattern::empty_set())),
            Pattern::Set(m, _) if m.is_empty() => Ok((PatternEnv::new(), TraceSet::new(), Pattern::empty_set())),
            _ => Err(Error::PatternMismatch(format!("empty comprehension against {p}"))),
        };
    }
    let mut rho = PatternEnv::new();
    let mut kept = TraceSet::new();
    let mut elems = BTreeMap::new();
    // Unlisted elements are free under a □ tail, so rows outside the
    // pattern may come and go; otherwise the source keeps exactly its rows.
    let source_tail = match p {
        Pattern::Set(_, Tail::Hole) => Tail::Hole,
        _ => Tail::Closed,
    };
    for (l, t, q) in split_by_labels(p, theta)? {
        let Some(q) = q else { continue };
        let (mut r, s) = slice(&q, t)?;
        let px = r.take(x);
        absorb_env(&mut rho, r)?;
        kept.insert(l.clone(), s);
        elems.insert(l.clone(), px);
    }
    Ok((rho, kept, Pattern::set(elems, source_tail)))
}

/// Slices with the outer pattern, then slices that slice with the inner one.
/// Returns (inner, outer) results.
pub fn diff_slice(
    inner: &Pattern,
    outer: &Pattern,
    t: &Trace,
) -> Result<((PatternEnv, Trace), (PatternEnv, Trace))> {
    if !leq(inner, outer) {
        return Err(Error::NotNested);
    }
    let (rho2, s2) = slice(outer, t)?;
    let (rho1, s1) = slice(inner, &s2)?;
    Ok(((rho1, s1), (rho2, s2)))
}

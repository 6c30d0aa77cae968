use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::expr::{Expr, PrimOp, Type};
use crate::trace::Trace;
use crate::value::{Const, Name, Value};

/// Typing context Γ.
pub type TypeEnv = BTreeMap<Name, Type>;

/// Types with an unknown part, for `{}` without annotation and for holes.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
    Rec(BTreeMap<Name, Ty>),
    Set(Box<Ty>),
    Unknown,
}

impl Ty {
    fn from_type(t: &Type) -> Ty {
        match t {
            Type::Int => Ty::Int,
            Type::Bool => Ty::Bool,
            Type::Record(fs) => Ty::Rec(fs.iter().map(|(k, v)| (k.clone(), Ty::from_type(v))).collect()),
            Type::Set(t) => Ty::Set(Box::new(Ty::from_type(t))),
        }
    }

    fn to_type(&self) -> Option<Type> {
        Some(match self {
            Ty::Int => Type::Int,
            Ty::Bool => Type::Bool,
            Ty::Rec(fs) => Type::Record(
                fs.iter()
                    .map(|(k, v)| v.to_type().map(|t| (k.clone(), t)))
                    .collect::<Option<_>>()?,
            ),
            Ty::Set(t) => Type::set(t.to_type()?),
            Ty::Unknown => return None,
        })
    }
}

fn show(t: &Ty) -> String {
    match t {
        Ty::Int => "int".into(),
        Ty::Bool => "bool".into(),
        Ty::Rec(fs) => format!(
            "<{}>",
            fs.iter()
                .map(|(k, v)| format!("{k}: {}", show(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Ty::Set(t) => format!("{{{}}}", show(t)),
        Ty::Unknown => "?".into(),
    }
}

fn unify(a: &Ty, b: &Ty) -> Result<Ty> {
    Ok(match (a, b) {
        (Ty::Unknown, t) | (t, Ty::Unknown) => t.clone(),
        (Ty::Int, Ty::Int) => Ty::Int,
        (Ty::Bool, Ty::Bool) => Ty::Bool,
        (Ty::Set(x), Ty::Set(y)) => Ty::Set(Box::new(unify(x, y)?)),
        (Ty::Rec(f), Ty::Rec(g)) if f.keys().eq(g.keys()) => Ty::Rec(
            f.iter()
                .zip(g.values())
                .map(|((k, x), y)| Ok((k.clone(), unify(x, y)?)))
                .collect::<Result<_>>()?,
        ),
        _ => {
            return Err(Error::Type(format!(
                "expected {}, found {}",
                show(a),
                show(b)
            )))
        }
    })
}

fn elem(t: &Ty, what: &str) -> Result<Ty> {
    match t {
        Ty::Set(x) => Ok((**x).clone()),
        Ty::Unknown => Ok(Ty::Unknown),
        _ => Err(Error::Type(format!("{what} must be a collection, found {}", show(t)))),
    }
}

fn field(t: &Ty, a: &str) -> Result<Ty> {
    match t {
        Ty::Rec(fs) => fs
            .get(a)
            .cloned()
            .ok_or_else(|| Error::Type(format!("record {} has no field {a}", show(t)))),
        Ty::Unknown => Ok(Ty::Unknown),
        _ => Err(Error::Type(format!("projection .{a} from {}", show(t)))),
    }
}

fn prim(op: PrimOp, args: &[Ty]) -> Result<Ty> {
    if args.len() != op.arity() {
        return Err(Error::Type(format!("{} takes {} arguments", op.symbol(), op.arity())));
    }
    let (arg, res) = op.signature();
    let arg = Ty::from_type(&arg);
    for a in args {
        unify(&arg, a)?;
    }
    Ok(Ty::from_type(&res))
}

fn distinct<'a>(names: impl IntoIterator<Item = &'a Name>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::DuplicateField(n.to_string()));
        }
    }
    Ok(())
}

type Ctx = BTreeMap<Name, Ty>;

fn bind(ctx: &Ctx, x: &Name, t: Ty) -> Ctx {
    let mut c = ctx.clone();
    c.insert(x.clone(), t);
    c
}

fn check_expr(ctx: &Ctx, e: &Expr) -> Result<Ty> {
    Ok(match e {
        Expr::Const(Const::Int(_)) => Ty::Int,
        Expr::Const(Const::Bool(_)) => Ty::Bool,
        Expr::Prim(op, args) => {
            let ts = args.iter().map(|a| check_expr(ctx, a)).collect::<Result<Vec<_>>>()?;
            prim(*op, &ts)?
        }
        Expr::Var(x) => ctx
            .get(x)
            .cloned()
            .ok_or_else(|| Error::Type(format!("unbound variable {x}")))?,
        Expr::Let(x, e1, e2) => {
            let t1 = check_expr(ctx, e1)?;
            check_expr(&bind(ctx, x, t1), e2)?
        }
        Expr::Record(fs) => {
            distinct(fs.iter().map(|(k, _)| k))?;
            Ty::Rec(
                fs.iter()
                    .map(|(k, e)| Ok((k.clone(), check_expr(ctx, e)?)))
                    .collect::<Result<_>>()?,
            )
        }
        Expr::Field(e1, a) => field(&check_expr(ctx, e1)?, a)?,
        Expr::If(c, e1, e2) => {
            unify(&Ty::Bool, &check_expr(ctx, c)?)?;
            unify(&check_expr(ctx, e1)?, &check_expr(ctx, e2)?)?
        }
        Expr::Empty(t) => Ty::Set(Box::new(t.as_ref().map_or(Ty::Unknown, Ty::from_type))),
        Expr::Singleton(e1) => Ty::Set(Box::new(check_expr(ctx, e1)?)),
        Expr::Union(e1, e2) => {
            let t = unify(&check_expr(ctx, e1)?, &check_expr(ctx, e2)?)?;
            elem(&t, "union operand")?;
            t
        }
        Expr::Comp { body, var, source } => {
            let x = elem(&check_expr(ctx, source)?, "comprehension source")?;
            let t = check_expr(&bind(ctx, var, x), body)?;
            elem(&t, "comprehension body")?;
            unify(&Ty::Set(Box::new(Ty::Unknown)), &t)?
        }
        Expr::Sum(e1) => {
            unify(&Ty::Set(Box::new(Ty::Int)), &check_expr(ctx, e1)?)?;
            Ty::Int
        }
        Expr::IsEmpty(e1) => {
            elem(&check_expr(ctx, e1)?, "argument of empty")?;
            Ty::Bool
        }
        Expr::Hole => Ty::Unknown,
    })
}

fn check_trace(ctx: &Ctx, t: &Trace) -> Result<Ty> {
    Ok(match t {
        Trace::Const(Const::Int(_)) => Ty::Int,
        Trace::Const(Const::Bool(_)) => Ty::Bool,
        Trace::Prim(op, args) => {
            let ts = args.iter().map(|a| check_trace(ctx, a)).collect::<Result<Vec<_>>>()?;
            prim(*op, &ts)?
        }
        Trace::Var(x) => ctx
            .get(x)
            .cloned()
            .ok_or_else(|| Error::Type(format!("unbound variable {x}")))?,
        Trace::Let(x, t1, t2) => {
            let a = check_trace(ctx, t1)?;
            check_trace(&bind(ctx, x, a), t2)?
        }
        Trace::Record(fs) => {
            distinct(fs.iter().map(|(k, _)| k))?;
            Ty::Rec(
                fs.iter()
                    .map(|(k, t)| Ok((k.clone(), check_trace(ctx, t)?)))
                    .collect::<Result<_>>()?,
            )
        }
        Trace::Field(t1, a) => field(&check_trace(ctx, t1)?, a)?,
        Trace::If {
            test,
            then_expr,
            else_expr,
            branch,
            ..
        } => {
            unify(&Ty::Bool, &check_trace(ctx, test)?)?;
            let e = unify(&check_expr(ctx, then_expr)?, &check_expr(ctx, else_expr)?)?;
            unify(&e, &check_trace(ctx, branch)?)?
        }
        Trace::Empty(t) => Ty::Set(Box::new(t.as_ref().map_or(Ty::Unknown, Ty::from_type))),
        Trace::Singleton(t1) => Ty::Set(Box::new(check_trace(ctx, t1)?)),
        Trace::Union(t1, t2) => {
            let t = unify(&check_trace(ctx, t1)?, &check_trace(ctx, t2)?)?;
            elem(&t, "union operand")?;
            t
        }
        Trace::Comp {
            body,
            var,
            source,
            traces,
        } => {
            let x = elem(&check_trace(ctx, source)?, "comprehension source")?;
            let inner = bind(ctx, var, x);
            let mut t = check_expr(&inner, body)?;
            elem(&t, "comprehension body")?;
            for ti in traces.values() {
                t = unify(&t, &check_trace(&inner, ti)?)?;
            }
            unify(&Ty::Set(Box::new(Ty::Unknown)), &t)?
        }
        Trace::Sum(t1) => {
            unify(&Ty::Set(Box::new(Ty::Int)), &check_trace(ctx, t1)?)?;
            Ty::Int
        }
        Trace::IsEmpty(t1) => {
            elem(&check_trace(ctx, t1)?, "argument of empty")?;
            Ty::Bool
        }
        Trace::Hole => Ty::Unknown,
    })
}

fn ctx_of(env: &TypeEnv) -> Ctx {
    env.iter().map(|(k, v)| (k.clone(), Ty::from_type(v))).collect()
}

fn resolved(t: Ty) -> Result<Type> {
    t.to_type()
        .ok_or_else(|| Error::Type(format!("cannot determine the type {}; annotate empty collections", show(&t))))
}

pub fn typecheck_expr(env: &TypeEnv, e: &Expr) -> Result<Type> {
    resolved(check_expr(&ctx_of(env), e)?)
}

pub fn typecheck_trace(env: &TypeEnv, t: &Trace) -> Result<Type> {
    resolved(check_trace(&ctx_of(env), t)?)
}

/// Checks that a possibly partial expression is well typed, without
/// requiring its type to be fully determined.
pub fn check_partial_expr(env: &TypeEnv, e: &Expr) -> Result<()> {
    check_expr(&ctx_of(env), e).map(|_| ())
}

/// Checks a possibly partial trace, without requiring a determined type.
pub fn check_partial_trace(env: &TypeEnv, t: &Trace) -> Result<()> {
    check_trace(&ctx_of(env), t).map(|_| ())
}

/// True when `v` has type `t`.
pub fn value_has_type(v: &Value, t: &Type) -> bool {
    match (v, t) {
        (Value::Const(Const::Int(_)), Type::Int) | (Value::Const(Const::Bool(_)), Type::Bool) => true,
        (Value::Record(fs), Type::Record(ts)) => {
            fs.len() == ts.len()
                && fs
                    .iter()
                    .zip(ts)
                    .all(|((a, v), (b, t))| a == b && value_has_type(v, t))
        }
        (Value::Coll(m), Type::Set(t)) => m.values().all(|v| value_has_type(v, t)),
        _ => false,
    }
}

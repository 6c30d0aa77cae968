use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{Expr, PrimOp};
use crate::label::Label;
use crate::trace::{Trace, TraceSet};
use crate::value::{prepend_label, Const, Env, Name, Value};

/// Variable lookup chain used while evaluating; avoids cloning γ per binding.
pub(crate) enum Scope<'a> {
    Base(&'a Env),
    Bind(&'a Scope<'a>, &'a Name, &'a Value),
}

impl Scope<'_> {
    pub(crate) fn lookup(&self, x: &str) -> Result<&Value> {
        let mut s = self;
        loop {
            match s {
                Scope::Base(env) => {
                    return env
                        .get(x)
                        .ok_or_else(|| Error::UnboundVariable(x.to_string()))
                }
                Scope::Bind(parent, y, v) => {
                    if &***y == x {
                        return Ok(v);
                    }
                    s = parent;
                }
            }
        }
    }
}

pub(crate) fn apply_prim(op: PrimOp, args: &[Value]) -> Result<Value> {
    use PrimOp::*;
    let int = |v: &Value| match v {
        Value::Const(Const::Int(n)) => Ok(*n),
        _ => Err(Error::Stuck(format!("{} expects integers", op.symbol()))),
    };
    let boolean = |v: &Value| match v {
        Value::Const(Const::Bool(b)) => Ok(*b),
        _ => Err(Error::Stuck(format!("{} expects booleans", op.symbol()))),
    };
    if args.len() != op.arity() {
        return Err(Error::Stuck(format!("{} expects {} arguments", op.symbol(), op.arity())));
    }
    Ok(match op {
        Add | Sub | Mul | Div | Mod => {
            let (a, b) = (int(&args[0])?, int(&args[1])?);
            let r = match op {
                Add => a.checked_add(b),
                Sub => a.checked_sub(b),
                Mul => a.checked_mul(b),
                Div | Mod if b == 0 => return Err(Error::DivideByZero),
                Div => a.checked_div(b),
                _ => a.checked_rem(b),
            };
            Value::int(r.ok_or(Error::Overflow)?)
        }
        Eq | Ne | Lt | Le | Gt | Ge => {
            let (a, b) = (int(&args[0])?, int(&args[1])?);
            Value::bool(match op {
                Eq => a == b,
                Ne => a != b,
                Lt => a < b,
                Le => a <= b,
                Gt => a > b,
                _ => a >= b,
            })
        }
        And => Value::bool(boolean(&args[0])? && boolean(&args[1])?),
        Or => Value::bool(boolean(&args[0])? || boolean(&args[1])?),
        Not => Value::bool(!boolean(&args[0])?),
    })
}

pub(crate) fn get_field(v: Value, a: &str) -> Result<Value> {
    match v {
        Value::Record(mut fs) => fs
            .remove(a)
            .ok_or_else(|| Error::Stuck(format!("record has no field {a}"))),
        _ => Err(Error::Stuck(format!("projection .{a} from a non-record"))),
    }
}

pub(crate) fn as_bool(v: &Value) -> Result<bool> {
    match v {
        Value::Const(Const::Bool(b)) => Ok(*b),
        _ => Err(Error::Stuck("condition is not a boolean".into())),
    }
}

pub(crate) fn into_coll(v: Value, what: &str) -> Result<BTreeMap<Label, Value>> {
    match v {
        Value::Coll(m) => Ok(m),
        _ => Err(Error::Stuck(format!("{what} is not a collection"))),
    }
}

pub(crate) fn sum(m: &BTreeMap<Label, Value>) -> Result<Value> {
    let mut total: i64 = 0;
    for v in m.values() {
        match v {
            Value::Const(Const::Int(n)) => total = total.checked_add(*n).ok_or(Error::Overflow)?,
            _ => return Err(Error::Stuck("sum over non-integers".into())),
        }
    }
    Ok(Value::int(total))
}

/// Collects comprehension results: ⊎ᵢ ℓᵢ·vᵢ. Source labels form a prefix
/// code, so the prepended domains never clash.
pub(crate) fn absorb(acc: &mut BTreeMap<Label, Value>, label: &Label, v: Value) -> Result<()> {
    for (l, x) in into_coll(v, "comprehension body")? {
        acc.insert(label.concat(&l), x);
    }
    Ok(())
}

/// Evaluates `e` under `env`, returning the value and its trace.
pub fn eval(env: &Env, e: &Expr) -> Result<(Value, Trace)> {
    eval_in(&Scope::Base(env), e)
}

/// Evaluates without keeping the trace.
pub fn eval_value(env: &Env, e: &Expr) -> Result<Value> {
    eval(env, e).map(|(v, _)| v)
}

fn eval_in(s: &Scope, e: &Expr) -> Result<(Value, Trace)> {
    Ok(match e {
        Expr::Const(c) => (Value::Const(*c), Trace::Const(*c)),
        Expr::Prim(op, args) => {
            let mut vs = Vec::with_capacity(args.len());
            let mut ts = Vec::with_capacity(args.len());
            for a in args {
                let (v, t) = eval_in(s, a)?;
                vs.push(v);
                ts.push(t);
            }
            (apply_prim(*op, &vs)?, Trace::Prim(*op, ts))
        }
        Expr::Var(x) => (s.lookup(x)?.clone(), Trace::Var(x.clone())),
        Expr::Let(x, e1, e2) => {
            let (v1, t1) = eval_in(s, e1)?;
            let (v2, t2) = eval_in(&Scope::Bind(s, x, &v1), e2)?;
            (v2, Trace::Let(x.clone(), Box::new(t1), Box::new(t2)))
        }
        Expr::Record(fs) => {
            let mut vs = BTreeMap::new();
            let mut ts = Vec::with_capacity(fs.len());
            for (a, fe) in fs {
                let (v, t) = eval_in(s, fe)?;
                if vs.insert(a.clone(), v).is_some() {
                    return Err(Error::DuplicateField(a.to_string()));
                }
                ts.push((a.clone(), t));
            }
            (Value::Record(vs), Trace::Record(ts))
        }
        Expr::Field(e1, a) => {
            let (v, t) = eval_in(s, e1)?;
            (get_field(v, a)?, Trace::Field(Box::new(t), a.clone()))
        }
        Expr::If(c, e1, e2) => {
            let (vc, tc) = eval_in(s, c)?;
            let taken = as_bool(&vc)?;
            let (v, t) = eval_in(s, if taken { e1 } else { e2 })?;
            (
                v,
                Trace::If {
                    test: Box::new(tc),
                    then_expr: Arc::clone(e1),
                    else_expr: Arc::clone(e2),
                    taken,
                    branch: Box::new(t),
                },
            )
        }
        Expr::Empty(ty) => (Value::empty(), Trace::Empty(ty.clone())),
        Expr::Singleton(e1) => {
            let (v, t) = eval_in(s, e1)?;
            let mut m = BTreeMap::new();
            m.insert(Label::empty(), v);
            (Value::Coll(m), Trace::Singleton(Box::new(t)))
        }
        Expr::Union(e1, e2) => {
            let (v1, t1) = eval_in(s, e1)?;
            let (v2, t2) = eval_in(s, e2)?;
            let mut m = into_coll(prepend_label(&Label::nat(1), v1)?, "union operand")?;
            m.extend(into_coll(prepend_label(&Label::nat(2), v2)?, "union operand")?);
            (Value::Coll(m), Trace::Union(Box::new(t1), Box::new(t2)))
        }
        Expr::Comp { body, var, source } => {
            let (v0, t0) = eval_in(s, source)?;
            let src = into_coll(v0, "comprehension source")?;
            let mut out = BTreeMap::new();
            let mut traces = TraceSet::new();
            for (l, x) in &src {
                let (v, t) = eval_in(&Scope::Bind(s, var, x), body)?;
                absorb(&mut out, l, v)?;
                traces.insert(l.clone(), t);
            }
            (
                Value::Coll(out),
                Trace::Comp {
                    body: Arc::clone(body),
                    var: var.clone(),
                    source: Box::new(t0),
                    traces,
                },
            )
        }
        Expr::Sum(e1) => {
            let (v, t) = eval_in(s, e1)?;
            (sum(&into_coll(v, "sum argument")?)?, Trace::Sum(Box::new(t)))
        }
        Expr::IsEmpty(e1) => {
            let (v, t) = eval_in(s, e1)?;
            let b = into_coll(v, "empty argument")?.is_empty();
            (Value::bool(b), Trace::IsEmpty(Box::new(t)))
        }
        Expr::Hole => return Err(Error::EvalHole),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::build as b;
    use crate::value::name;

    fn l(s: &str) -> Label {
        Label::parse(s).unwrap()
    }

    #[test]
    fn singleton_union_labels() {
        let env = Env::new();
        let (v, _) = eval(&env, &b::sng(b::int(7))).unwrap();
        assert_eq!(v, Value::coll([(Label::empty(), Value::int(7))]).unwrap());
        let (v, t) = eval(&env, &b::union(b::sng(b::int(1)), b::sng(b::int(2)))).unwrap();
        assert_eq!(
            v,
            Value::coll([(l("1"), Value::int(1)), (l("2"), Value::int(2))]).unwrap()
        );
        assert!(matches!(t, Trace::Union(..)));
    }

    #[test]
    fn comprehension_prepends_source_labels() {
        let mut env = Env::new();
        env.insert(
            name("R"),
            Value::coll([(l("r1"), Value::int(1)), (l("r2"), Value::int(2))]).unwrap(),
        );
        let q = b::comp(b::sng(b::bin(PrimOp::Add, b::var("x"), b::int(10))), "x", b::var("R"));
        let (v, t) = eval(&env, &q).unwrap();
        assert_eq!(
            v,
            Value::coll([(l("r1"), Value::int(11)), (l("r2"), Value::int(12))]).unwrap()
        );
        match t {
            Trace::Comp { traces, .. } => assert_eq!(traces.len(), 2),
            _ => panic!(),
        }
    }

    #[test]
    fn arithmetic_errors() {
        let env = Env::new();
        assert_eq!(
            eval(&env, &b::bin(PrimOp::Div, b::int(1), b::int(0))).unwrap_err(),
            Error::DivideByZero
        );
        assert_eq!(
            eval(&env, &Expr::Sum(b::empty())).unwrap().0,
            Value::int(0)
        );
        assert_eq!(eval(&env, &b::var("z")).unwrap_err(), Error::UnboundVariable("z".into()));
    }
}

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::eval::{absorb, apply_prim, as_bool, get_field, into_coll, sum, Scope};
use crate::label::Label;
use crate::trace::Trace;
use crate::value::{prepend_label, Env, Value};

/// Re-runs the computation recorded in `t` against `env`, following the
/// recorded control flow. Fails if a conditional goes the other way, a
/// source element has no recorded trace, or a hole is reached.
pub fn replay(env: &Env, t: &Trace) -> Result<Value> {
    replay_in(&Scope::Base(env), t).map_err(|e| e.at(""))
}

fn replay_in(s: &Scope, t: &Trace) -> Result<Value> {
    Ok(match t {
        Trace::Hole => {
            return Err(Error::HoleEncountered {
                path: String::new(),
            })
        }
        Trace::Const(c) => Value::Const(*c),
        Trace::Prim(op, args) => {
            let vs = args
                .iter()
                .enumerate()
                .map(|(i, a)| replay_in(s, a).map_err(|e| e.at(&format!("{}#{i}", op.symbol()))))
                .collect::<Result<Vec<_>>>()?;
            apply_prim(*op, &vs)?
        }
        Trace::Var(x) => s.lookup(x)?.clone(),
        Trace::Let(x, t1, t2) => {
            let v1 = replay_in(s, t1).map_err(|e| e.at(&format!("let {x}")))?;
            replay_in(&Scope::Bind(s, x, &v1), t2).map_err(|e| e.at("in"))?
        }
        Trace::Record(fs) => {
            let mut out = BTreeMap::new();
            for (a, ft) in fs {
                let v = replay_in(s, ft).map_err(|e| e.at(&format!("<{a}>")))?;
                out.insert(a.clone(), v);
            }
            Value::Record(out)
        }
        Trace::Field(t1, a) => get_field(replay_in(s, t1).map_err(|e| e.at(&format!(".{a}")))?, a)?,
        Trace::If {
            test, taken, branch, ..
        } => {
            let b = as_bool(&replay_in(s, test).map_err(|e| e.at("if"))?)?;
            if b != *taken {
                return Err(Error::ControlFlowMismatch {
                    path: String::from("if"),
                    recorded: *taken,
                    actual: b,
                });
            }
            replay_in(s, branch).map_err(|e| e.at(if *taken { "then" } else { "else" }))?
        }
        Trace::Empty(_) => Value::empty(),
        Trace::Singleton(t1) => {
            let v = replay_in(s, t1).map_err(|e| e.at("{}"))?;
            let mut m = BTreeMap::new();
            m.insert(Label::empty(), v);
            Value::Coll(m)
        }
        Trace::Union(t1, t2) => {
            let v1 = replay_in(s, t1).map_err(|e| e.at("union#1"))?;
            let v2 = replay_in(s, t2).map_err(|e| e.at("union#2"))?;
            let mut m = into_coll(prepend_label(&Label::nat(1), v1)?, "union operand")?;
            m.extend(into_coll(prepend_label(&Label::nat(2), v2)?, "union operand")?);
            Value::Coll(m)
        }
        Trace::Comp {
            var,
            source,
            traces,
            ..
        } => {
            let src = into_coll(
                replay_in(s, source).map_err(|e| e.at(&format!("for {var} in")))?,
                "comprehension source",
            )?;
            let mut out = BTreeMap::new();
            for (l, x) in &src {
                let ti = traces.get(l).ok_or_else(|| Error::MissingTraceLabel {
                    path: format!("for {var}"),
                    label: l.clone(),
                })?;
                let v = replay_in(&Scope::Bind(s, var, x), ti)
                    .map_err(|e| e.at(&format!("for {var}{l}")))?;
                absorb(&mut out, l, v)?;
            }
            Value::Coll(out)
        }
        Trace::Sum(t1) => sum(&into_coll(replay_in(s, t1).map_err(|e| e.at("sum"))?, "sum argument")?)?,
        Trace::IsEmpty(t1) => Value::bool(
            into_coll(replay_in(s, t1).map_err(|e| e.at("empty"))?, "empty argument")?.is_empty(),
        ),
    })
}

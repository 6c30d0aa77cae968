//! JSON encodings of values, types, patterns and traces.
//!
//! Labels are arrays of strings; all-digit strings are naturals. Stored
//! expressions inside traces are surface-syntax strings.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::expr::{PrimOp, Type};
use crate::label::{is_prefix_code, Atom, Label};
use crate::pattern::{Pattern, PatternEnv, Tail};
use crate::syntax::parse_query;
use crate::trace::{Trace, TraceSet};
use crate::value::{name, Const, Value};

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn obj1<'a>(j: &'a Json, what: &str) -> Result<(&'a str, &'a Json)> {
    match j.as_object() {
        Some(m) if m.len() == 1 => {
            let (k, v) = m.iter().next().expect("one entry");
            Ok((k.as_str(), v))
        }
        _ => Err(bad(format!("expected a one-key object for {what}, got {j}"))),
    }
}

fn get<'a>(j: &'a Json, key: &str) -> Result<&'a Json> {
    j.get(key).ok_or_else(|| bad(format!("missing key {key:?}")))
}

fn string<'a>(j: &'a Json, what: &str) -> Result<&'a str> {
    j.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn array<'a>(j: &'a Json, what: &str) -> Result<&'a Vec<Json>> {
    j.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn label_to_json(l: &Label) -> Json {
    Json::Array(l.atoms().iter().map(|a| Json::String(a.to_string())).collect())
}

pub fn label_from_json(j: &Json) -> Result<Label> {
    array(j, "label")?
        .iter()
        .map(|a| Atom::parse(string(a, "label atom")?))
        .collect::<Result<Vec<_>>>()
        .map(Label::new)
}

fn const_to_json(c: &Const) -> Json {
    match c {
        Const::Int(n) => json!({ "int": n }),
        Const::Bool(b) => json!({ "bool": b }),
    }
}

fn const_from(key: &str, body: &Json) -> Result<Option<Const>> {
    Ok(match key {
        "int" => Some(Const::Int(body.as_i64().ok_or_else(|| bad("int must be an integer"))?)),
        "bool" => Some(Const::Bool(body.as_bool().ok_or_else(|| bad("bool must be a boolean"))?)),
        _ => None,
    })
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Const(c) => const_to_json(c),
        Value::Record(fs) => {
            json!({ "rec": fs.iter().map(|(k, v)| (k.to_string(), value_to_json(v))).collect::<Map<_, _>>() })
        }
        Value::Coll(m) => json!({
            "coll": m.iter().map(|(l, v)| json!({ "label": label_to_json(l), "value": value_to_json(v) })).collect::<Vec<_>>()
        }),
    }
}

pub fn value_from_json(j: &Json) -> Result<Value> {
    let (k, body) = obj1(j, "value")?;
    if let Some(c) = const_from(k, body)? {
        return Ok(Value::Const(c));
    }
    match k {
        "rec" => Ok(Value::Record(
            body.as_object()
                .ok_or_else(|| bad("rec must be an object"))?
                .iter()
                .map(|(k, v)| Ok((name(k), value_from_json(v)?)))
                .collect::<Result<_>>()?,
        )),
        "coll" => {
            let mut m = BTreeMap::new();
            for e in array(body, "coll")? {
                let l = label_from_json(get(e, "label")?)?;
                if m.insert(l.clone(), value_from_json(get(e, "value")?)?).is_some() {
                    return Err(bad(format!("duplicate label {l}")));
                }
            }
            if !is_prefix_code(m.keys()) {
                return Err(Error::NotPrefixCode);
            }
            Ok(Value::Coll(m))
        }
        _ => Err(bad(format!("unknown value kind {k:?}"))),
    }
}

pub fn type_to_json(t: &Type) -> Json {
    match t {
        Type::Int => json!("int"),
        Type::Bool => json!("bool"),
        Type::Record(fs) => {
            json!({ "rec": fs.iter().map(|(k, t)| (k.to_string(), type_to_json(t))).collect::<Map<_, _>>() })
        }
        Type::Set(t) => json!({ "set": type_to_json(t) }),
    }
}

pub fn type_from_json(j: &Json) -> Result<Type> {
    match j.as_str() {
        Some("int") => return Ok(Type::Int),
        Some("bool") => return Ok(Type::Bool),
        Some(s) => return Err(bad(format!("unknown type {s:?}"))),
        None => {}
    }
    let (k, body) = obj1(j, "type")?;
    match k {
        "rec" => Ok(Type::Record(
            body.as_object()
                .ok_or_else(|| bad("rec must be an object"))?
                .iter()
                .map(|(k, t)| Ok((name(k), type_from_json(t)?)))
                .collect::<Result<_>>()?,
        )),
        "set" => Ok(Type::set(type_from_json(body)?)),
        _ => Err(bad(format!("unknown type kind {k:?}"))),
    }
}

fn tail_to_json(t: Tail) -> Json {
    json!(match t {
        Tail::Closed => "closed",
        Tail::Hole => "hole",
        Tail::Diamond => "diamond",
    })
}

fn tail_from_json(j: &Json) -> Result<Tail> {
    match j.as_str() {
        Some("closed") => Ok(Tail::Closed),
        Some("hole") => Ok(Tail::Hole),
        Some("diamond") => Ok(Tail::Diamond),
        _ => Err(bad(format!("bad tail {j}"))),
    }
}

pub fn pattern_to_json(p: &Pattern) -> Json {
    match p {
        Pattern::Hole => json!("hole"),
        Pattern::Diamond => json!("diamond"),
        Pattern::Const(c) => const_to_json(c),
        Pattern::Record(fs, t) => json!({ "rec": {
            "fields": fs.iter().map(|(k, p)| (k.to_string(), pattern_to_json(p))).collect::<Map<_, _>>(),
            "tail": tail_to_json(*t),
        }}),
        Pattern::Set(m, t) => json!({ "set": {
            "elems": m.iter().map(|(l, p)| json!({ "label": label_to_json(l), "pattern": pattern_to_json(p) })).collect::<Vec<_>>(),
            "tail": tail_to_json(*t),
        }}),
    }
}

pub fn pattern_from_json(j: &Json) -> Result<Pattern> {
    match j.as_str() {
        Some("hole") => return Ok(Pattern::Hole),
        Some("diamond") => return Ok(Pattern::Diamond),
        Some(s) => return Err(bad(format!("unknown pattern {s:?}"))),
        None => {}
    }
    let (k, body) = obj1(j, "pattern")?;
    if let Some(c) = const_from(k, body)? {
        return Ok(Pattern::Const(c));
    }
    match k {
        "rec" => Ok(Pattern::Record(
            get(body, "fields")?
                .as_object()
                .ok_or_else(|| bad("fields must be an object"))?
                .iter()
                .map(|(k, p)| Ok((name(k), pattern_from_json(p)?)))
                .collect::<Result<_>>()?,
            tail_from_json(get(body, "tail")?)?,
        )),
        "set" => {
            let elems = array(get(body, "elems")?, "elems")?
                .iter()
                .map(|e| Ok((label_from_json(get(e, "label")?)?, pattern_from_json(get(e, "pattern")?)?)))
                .collect::<Result<Vec<_>>>()?;
            Pattern::try_set(elems, tail_from_json(get(body, "tail")?)?)
        }
        _ => Err(bad(format!("unknown pattern kind {k:?}"))),
    }
}

pub fn env_to_json(rho: &PatternEnv) -> Json {
    Json::Object(rho.iter().map(|(x, p)| (x.to_string(), pattern_to_json(p))).collect())
}

pub fn env_from_json(j: &Json) -> Result<PatternEnv> {
    j.as_object()
        .ok_or_else(|| bad("pattern environment must be an object"))?
        .iter()
        .map(|(x, p)| Ok((name(x), pattern_from_json(p)?)))
        .collect()
}

pub fn trace_to_json(t: &Trace) -> Json {
    let b = |t: &Trace| trace_to_json(t);
    match t {
        Trace::Hole => json!("hole"),
        Trace::Const(c) => json!({ "const": const_to_json(c) }),
        Trace::Prim(op, args) => json!({ "prim": { "op": op.symbol(), "args": args.iter().map(b).collect::<Vec<_>>() } }),
        Trace::Var(x) => json!({ "var": x.to_string() }),
        Trace::Let(x, t1, t2) => json!({ "let": { "var": x.to_string(), "bound": b(t1), "body": b(t2) } }),
        Trace::Record(fs) => json!({ "rec": fs.iter().map(|(a, t)| json!({ "field": a.to_string(), "trace": b(t) })).collect::<Vec<_>>() }),
        Trace::Field(t1, a) => json!({ "proj": { "trace": b(t1), "field": a.to_string() } }),
        Trace::If {
            test,
            then_expr,
            else_expr,
            taken,
            branch,
        } => json!({ "if": {
            "test": b(test),
            "then": then_expr.to_string(),
            "else": else_expr.to_string(),
            "taken": taken,
            "branch": b(branch),
        }}),
        Trace::Empty(ty) => json!({ "empty": ty.as_ref().map(type_to_json) }),
        Trace::Singleton(t1) => json!({ "sng": b(t1) }),
        Trace::Union(t1, t2) => json!({ "union": [b(t1), b(t2)] }),
        Trace::Comp {
            body,
            var,
            source,
            traces,
        } => json!({ "comp": {
            "var": var.to_string(),
            "body": body.to_string(),
            "source": b(source),
            "traces": traces.iter().map(|(l, t)| json!({ "label": label_to_json(l), "trace": b(t) })).collect::<Vec<_>>(),
        }}),
        Trace::Sum(t1) => json!({ "sum": b(t1) }),
        Trace::IsEmpty(t1) => json!({ "isempty": b(t1) }),
    }
}

pub fn trace_from_json(j: &Json) -> Result<Trace> {
    let sub = |j: &Json, key: &str| -> Result<Box<Trace>> { Ok(Box::new(trace_from_json(get(j, key)?)?)) };
    let var = |j: &Json| -> Result<crate::value::Name> { Ok(name(string(get(j, "var")?, "var")?)) };
    if j.as_str() == Some("hole") {
        return Ok(Trace::Hole);
    }
    let (k, body) = obj1(j, "trace")?;
    Ok(match k {
        "const" => {
            let (ck, cb) = obj1(body, "constant")?;
            Trace::Const(const_from(ck, cb)?.ok_or_else(|| bad("bad constant"))?)
        }
        "prim" => {
            let op = string(get(body, "op")?, "op")?;
            let op = PrimOp::from_symbol(op).ok_or_else(|| bad(format!("unknown primitive {op:?}")))?;
            let args = array(get(body, "args")?, "args")?
                .iter()
                .map(trace_from_json)
                .collect::<Result<Vec<_>>>()?;
            if args.len() != op.arity() {
                return Err(bad(format!("{} takes {} arguments", op.symbol(), op.arity())));
            }
            Trace::Prim(op, args)
        }
        "var" => Trace::Var(name(string(body, "var")?)),
        "let" => Trace::Let(var(body)?, sub(body, "bound")?, sub(body, "body")?),
        "rec" => Trace::Record(
            array(body, "rec")?
                .iter()
                .map(|f| Ok((name(string(get(f, "field")?, "field")?), trace_from_json(get(f, "trace")?)?)))
                .collect::<Result<_>>()?,
        ),
        "proj" => Trace::Field(sub(body, "trace")?, name(string(get(body, "field")?, "field")?)),
        "if" => Trace::If {
            test: sub(body, "test")?,
            then_expr: parse_query(string(get(body, "then")?, "then")?)?,
            else_expr: parse_query(string(get(body, "else")?, "else")?)?,
            taken: get(body, "taken")?.as_bool().ok_or_else(|| bad("taken must be a boolean"))?,
            branch: sub(body, "branch")?,
        },
        "empty" => Trace::Empty(if body.is_null() { None } else { Some(type_from_json(body)?) }),
        "sng" => Trace::Singleton(Box::new(trace_from_json(body)?)),
        "union" => match array(body, "union")?.as_slice() {
            [a, b] => Trace::Union(Box::new(trace_from_json(a)?), Box::new(trace_from_json(b)?)),
            _ => return Err(bad("union takes two traces")),
        },
        "comp" => {
            let mut traces = TraceSet::new();
            for e in array(get(body, "traces")?, "traces")? {
                let l = label_from_json(get(e, "label")?)?;
                if traces.insert(l.clone(), trace_from_json(get(e, "trace")?)?).is_some() {
                    return Err(bad(format!("duplicate label {l}")));
                }
            }
            Trace::Comp {
                body: parse_query(string(get(body, "body")?, "body")?)?,
                var: var(body)?,
                source: sub(body, "source")?,
                traces,
            }
        }
        "sum" => Trace::Sum(Box::new(trace_from_json(body)?)),
        "isempty" => Trace::IsEmpty(Box::new(trace_from_json(body)?)),
        _ => return Err(bad(format!("unknown trace kind {k:?}"))),
    })
}

//! Browser bindings. Every entry point takes the tables as a JSON array of
//! table objects (the format of `data/*.json`) and returns a JSON string:
//! `{"ok": ...}` on success, `{"error": "..."}` otherwise.

use nrc_slicer::report::SliceReport;
use nrc_slicer::table::environments;
use nrc_slicer::{
    eval, parse_pattern, parse_query, query_slice, render_trace, slice, typecheck_expr, Env, Error, Expr,
    Table, Trace,
};
use serde_json::{json, Value as Json};
use std::sync::Arc;
use wasm_bindgen::prelude::*;

struct Run {
    env: Env,
    query: Arc<Expr>,
    trace: Trace,
    result: String,
}

fn load(tables: &str, query: &str) -> Result<Run, Error> {
    let j: Json = serde_json::from_str(tables).map_err(|e| Error::Format(format!("tables: {e}")))?;
    let list = match j {
        Json::Array(items) => items,
        single => vec![single],
    };
    let tables = list.iter().map(Table::from_json).collect::<Result<Vec<_>, _>>()?;
    let (env, ctx) = environments(&tables)?;
    let query = parse_query(query)?;
    typecheck_expr(&ctx, &query)?;
    let (v, trace) = eval(&env, &query)?;
    Ok(Run { env, query, trace, result: v.to_string() })
}

fn respond(r: Result<Json, Error>) -> String {
    match r {
        Ok(j) => json!({ "ok": j }).to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn inputs(report: &SliceReport) -> Json {
    report
        .input_resolved
        .iter()
        .map(|(x, p)| (x.to_string(), Json::String(p.to_string())))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

pub fn eval_json(tables: &str, query: &str) -> String {
    respond(load(tables, query).map(|r| {
        json!({
            "result": r.result,
            "trace": render_trace(&r.trace),
            "trace_size": r.trace.size(),
        })
    }))
}

pub fn slice_json(tables: &str, query: &str, pattern: &str) -> String {
    respond((|| {
        let r = load(tables, query)?;
        let p = parse_pattern(pattern)?;
        let (rho, s) = slice(&p, &r.trace)?;
        let report = SliceReport::new(p, rho, &r.env);
        Ok(json!({
            "result": r.result,
            "inputs": inputs(&report),
            "trace": render_trace(&s),
            "trace_size": r.trace.size(),
            "slice_size": s.size(),
        }))
    })())
}

pub fn qslice_json(tables: &str, query: &str, pattern: &str) -> String {
    respond((|| {
        let r = load(tables, query)?;
        let p = parse_pattern(pattern)?;
        let (rho, e) = query_slice(&p, &r.trace)?;
        let report = SliceReport::new(p, rho, &r.env);
        Ok(json!({
            "result": r.result,
            "inputs": inputs(&report),
            "query": e.to_string(),
            "query_size": r.query.size(),
            "slice_size": e.size(),
        }))
    })())
}

#[wasm_bindgen(js_name = evalQuery)]
pub fn eval_query(tables: &str, query: &str) -> String {
    eval_json(tables, query)
}

#[wasm_bindgen(js_name = sliceTrace)]
pub fn slice_trace(tables: &str, query: &str, pattern: &str) -> String {
    slice_json(tables, query, pattern)
}

#[wasm_bindgen(js_name = sliceQuery)]
pub fn slice_query(tables: &str, query: &str, pattern: &str) -> String {
    qslice_json(tables, query, pattern)
}

use std::sync::Arc;
use std::time::Duration;

use serde_json::{json, Value as Json};

use crate::expr::Expr;
use crate::json::{env_to_json, pattern_to_json, trace_to_json};
use crate::pattern::{resolve, Pattern, PatternEnv};
use crate::syntax::{render_diff, render_trace};
use crate::trace::Trace;
use crate::value::Env;

/// Result of one slicing request, ready to print as JSON or text.
#[derive(Clone, Debug)]
pub struct SliceReport {
    pub pattern: Pattern,
    /// ρ as computed, with `◇` where the input must stay equal.
    pub input_pattern: PatternEnv,
    /// ρ with each `◇` replaced by the input it stands for.
    pub input_resolved: PatternEnv,
    pub trace: Option<Trace>,
    pub query: Option<Arc<Expr>>,
    pub stats: Option<SliceStats>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceStats {
    pub trace_size: usize,
    pub slice_size: usize,
    pub elapsed: Duration,
}

/// `ρ` with diamonds resolved against the input environment.
pub fn resolve_env(rho: &PatternEnv, env: &Env) -> PatternEnv {
    rho.iter()
        .map(|(x, p)| {
            let r = match env.get(x) {
                Some(v) => resolve(p, v),
                None => p.clone(),
            };
            (x.clone(), r)
        })
        .collect()
}

impl SliceReport {
    pub fn new(pattern: Pattern, rho: PatternEnv, env: &Env) -> SliceReport {
        SliceReport {
            pattern,
            input_resolved: resolve_env(&rho, env),
            input_pattern: rho,
            trace: None,
            query: None,
            stats: None,
        }
    }

    pub fn to_json(&self) -> Json {
        let mut j = json!({
            "pattern": pattern_to_json(&self.pattern),
            "pattern_text": self.pattern.to_string(),
            "input_pattern": env_to_json(&self.input_pattern),
            "input_resolved": env_to_json(&self.input_resolved),
            "input_text": self.input_resolved.iter().map(|(x, p)| (x.to_string(), Json::String(p.to_string()))).collect::<serde_json::Map<_, _>>(),
        });
        if let Some(t) = &self.trace {
            j["trace"] = trace_to_json(t);
        }
        if let Some(q) = &self.query {
            j["query"] = Json::String(q.to_string());
        }
        if let Some(s) = &self.stats {
            j["stats"] = json!({
                "trace_size": s.trace_size,
                "slice_size": s.slice_size,
                "elapsed_ms": s.elapsed.as_secs_f64() * 1e3,
            });
        }
        j
    }

    pub fn to_pretty(&self) -> String {
        let mut out = format!("output pattern: {}\n", self.pattern);
        out.push_str("input slice:\n");
        if self.input_resolved.is_empty() {
            out.push_str("  (nothing)\n");
        }
        for (x, p) in self.input_resolved.iter() {
            out.push_str(&format!("  {x} = {p}\n"));
        }
        if let Some(q) = &self.query {
            out.push_str(&format!("query slice:\n  {q}\n"));
        }
        if let Some(t) = &self.trace {
            out.push_str(&format!("trace slice:\n{}\n", render_trace(t)));
        }
        if let Some(s) = &self.stats {
            out.push_str(&format!(
                "trace size {}, slice size {}, {:.3} ms\n",
                s.trace_size,
                s.slice_size,
                s.elapsed.as_secs_f64() * 1e3
            ));
        }
        out
    }
}

/// Text for a differential query slice: the outer slice with the part
/// only it needs boxed in `[[ ]]`.
pub fn diff_text(inner: &Expr, outer: &Expr) -> String {
    render_diff(inner, outer)
}

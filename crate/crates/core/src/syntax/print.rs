use std::fmt::{self, Write};

use super::parser::prec;
use crate::expr::{Expr, PrimOp, Type};
use crate::trace::Trace;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Let(..) | Expr::If(..) => 0,
        Expr::Prim(op, _) if *op != PrimOp::Not => prec(*op),
        Expr::Prim(..) | Expr::Sum(_) | Expr::IsEmpty(_) => 6,
        Expr::Field(..) => 7,
        _ => 8,
    }
}

/// Renders `e`, wrapping it in parentheses unless it binds at least as
/// tightly as `min`. `mark` is called on every node and may wrap the text.
fn expr_at(out: &mut String, e: &Expr, min: u8, mark: &dyn Fn(&Expr) -> bool) {
    let boxed = mark(e);
    if boxed {
        out.push_str("[[");
    }
    let paren = !boxed && level(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Const(c) => write!(out, "{c}").unwrap(),
        Expr::Var(x) => out.push_str(x),
        Expr::Hole => out.push('_'),
        Expr::Prim(PrimOp::Not, args) => {
            out.push('!');
            expr_at(out, &args[0], 6, mark);
        }
        Expr::Prim(op, args) => {
            let l = prec(*op);
            let left = if l == 3 { l + 1 } else { l };
            expr_at(out, &args[0], left, mark);
            write!(out, " {} ", op.symbol()).unwrap();
            expr_at(out, &args[1], l + 1, mark);
        }
        Expr::Let(x, e1, e2) => {
            write!(out, "let {x} = ").unwrap();
            expr_at(out, e1, 0, mark);
            out.push_str(" in ");
            expr_at(out, e2, 0, mark);
        }
        Expr::Record(fs) => {
            out.push('<');
            for (i, (a, fe)) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write!(out, "{a}: ").unwrap();
                expr_at(out, fe, 7, mark);
            }
            out.push('>');
        }
        Expr::Field(e1, a) => {
            expr_at(out, e1, 7, mark);
            write!(out, ".{a}").unwrap();
        }
        Expr::If(c, a, b) => {
            out.push_str("if ");
            expr_at(out, c, 0, mark);
            out.push_str(" then ");
            expr_at(out, a, 0, mark);
            out.push_str(" else ");
            expr_at(out, b, 0, mark);
        }
        Expr::Empty(None) => out.push_str("{}"),
        Expr::Empty(Some(t)) => write!(out, "{{}} : {t}").unwrap(),
        Expr::Singleton(e1) => {
            out.push('{');
            expr_at(out, e1, 0, mark);
            out.push('}');
        }
        Expr::Union(a, b) => {
            out.push_str("union {");
            expr_at(out, a, 0, mark);
            out.push_str(", ");
            expr_at(out, b, 0, mark);
            out.push('}');
        }
        Expr::Comp { body, var, source } => {
            out.push_str("union {");
            expr_at(out, body, 0, mark);
            write!(out, " | {var} in ").unwrap();
            expr_at(out, source, 0, mark);
            out.push('}');
        }
        Expr::Sum(e1) => {
            out.push_str("sum ");
            expr_at(out, e1, 6, mark);
        }
        Expr::IsEmpty(e1) => {
            out.push_str("empty ");
            expr_at(out, e1, 6, mark);
        }
    }
    if paren {
        out.push(')');
    }
    if boxed {
        out.push_str("]]");
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        expr_at(&mut s, self, 0, &|_| false);
        f.write_str(&s)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => f.write_str("int"),
            Type::Bool => f.write_str("bool"),
            Type::Set(t) => write!(f, "{{{t}}}"),
            Type::Record(fs) => {
                f.write_str("<")?;
                for (i, (a, t)) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}: {t}")?;
                }
                f.write_str(">")
            }
        }
    }
}

/// Renders the outer query slice with every subexpression that the inner
/// slice leaves out (but the outer one keeps) wrapped in `[[ ]]`.
pub fn render_diff(inner: &Expr, outer: &Expr) -> String {
    let mut out = String::new();
    diff_at(&mut out, inner, outer);
    out
}

fn diff_at(out: &mut String, inner: &Expr, outer: &Expr) {
    // Walk both trees together; where the inner one has a hole and the
    // outer one does not, box the whole outer subtree.
    fn collect<'a>(inner: &Expr, outer: &'a Expr, acc: &mut Vec<*const Expr>) {
        if matches!(inner, Expr::Hole) {
            if !matches!(outer, Expr::Hole) {
                acc.push(outer as *const Expr);
            }
            return;
        }
        let pairs: Vec<(&Expr, &Expr)> = match (inner, outer) {
            (Expr::Prim(_, xs), Expr::Prim(_, ys)) => xs.iter().zip(ys).map(|(a, b)| (&**a, &**b)).collect(),
            (Expr::Let(_, a1, b1), Expr::Let(_, a2, b2)) | (Expr::Union(a1, b1), Expr::Union(a2, b2)) => {
                vec![(&**a1, &**a2), (&**b1, &**b2)]
            }
            (Expr::Record(fs), Expr::Record(gs)) => fs.iter().zip(gs).map(|(a, b)| (&*a.1, &*b.1)).collect(),
            (Expr::Field(a, _), Expr::Field(b, _))
            | (Expr::Singleton(a), Expr::Singleton(b))
            | (Expr::Sum(a), Expr::Sum(b))
            | (Expr::IsEmpty(a), Expr::IsEmpty(b)) => vec![(&**a, &**b)],
            (Expr::If(c1, a1, b1), Expr::If(c2, a2, b2)) => {
                vec![(&**c1, &**c2), (&**a1, &**a2), (&**b1, &**b2)]
            }
            (
                Expr::Comp {
                    body: e1, source: s1, ..
                },
                Expr::Comp {
                    body: e2, source: s2, ..
                },
            ) => vec![(&**e1, &**e2), (&**s1, &**s2)],
            _ => vec![],
        };
        for (a, b) in pairs {
            collect(a, b, acc);
        }
    }
    let mut marked = Vec::new();
    collect(inner, outer, &mut marked);
    expr_at(out, outer, 0, &|e| marked.contains(&(e as *const Expr)));
}

/// Human-readable trace rendering: conditionals print as `if(T; e1; e2) =>b T'`
/// and comprehensions as `comp(x; e; T) { [l]: T_l ... }`.
pub fn render_trace(t: &Trace) -> String {
    let mut out = String::new();
    trace_at(&mut out, t, 0);
    out
}

fn indent(out: &mut String, depth: usize) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn trace_at(out: &mut String, t: &Trace, depth: usize) {
    match t {
        Trace::Hole => out.push('_'),
        Trace::Const(c) => write!(out, "{c}").unwrap(),
        Trace::Var(x) => out.push_str(x),
        Trace::Prim(PrimOp::Not, args) => {
            out.push_str("!(");
            trace_at(out, &args[0], depth);
            out.push(')');
        }
        Trace::Prim(op, args) => {
            out.push('(');
            trace_at(out, &args[0], depth);
            write!(out, " {} ", op.symbol()).unwrap();
            trace_at(out, &args[1], depth);
            out.push(')');
        }
        Trace::Let(x, t1, t2) => {
            write!(out, "let {x} = ").unwrap();
            trace_at(out, t1, depth);
            out.push_str(" in ");
            trace_at(out, t2, depth);
        }
        Trace::Record(fs) => {
            out.push('<');
            for (i, (a, ft)) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write!(out, "{a}: ").unwrap();
                trace_at(out, ft, depth);
            }
            out.push('>');
        }
        Trace::Field(t1, a) => {
            trace_at(out, t1, depth);
            write!(out, ".{a}").unwrap();
        }
        Trace::If {
            test,
            then_expr,
            else_expr,
            taken,
            branch,
        } => {
            out.push_str("if(");
            trace_at(out, test, depth);
            write!(out, "; {then_expr}; {else_expr}) =>{taken} ").unwrap();
            trace_at(out, branch, depth);
        }
        Trace::Empty(None) => out.push_str("{}"),
        Trace::Empty(Some(ty)) => write!(out, "{{}} : {ty}").unwrap(),
        Trace::Singleton(t1) => {
            out.push('{');
            trace_at(out, t1, depth);
            out.push('}');
        }
        Trace::Union(a, b) => {
            out.push_str("union(");
            trace_at(out, a, depth);
            out.push_str(", ");
            trace_at(out, b, depth);
            out.push(')');
        }
        Trace::Comp {
            body,
            var,
            source,
            traces,
        } => {
            write!(out, "comp({var}; {body}; ").unwrap();
            trace_at(out, source, depth);
            out.push_str(") {");
            for (l, ti) in traces {
                indent(out, depth + 1);
                write!(out, "{l}: ").unwrap();
                trace_at(out, ti, depth + 1);
            }
            if !traces.is_empty() {
                indent(out, depth);
            }
            out.push('}');
        }
        Trace::Sum(t1) => {
            out.push_str("sum(");
            trace_at(out, t1, depth);
            out.push(')');
        }
        Trace::IsEmpty(t1) => {
            out.push_str("empty(");
            trace_at(out, t1, depth);
            out.push(')');
        }
    }
}

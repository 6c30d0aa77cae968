use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{lex, Tok, Token};
use crate::error::{Error, Result};
use crate::expr::{Expr, PrimOp, Type};
use crate::label::{is_prefix_code, Atom, Label};
use crate::pattern::{Pattern, Tail};
use crate::value::{name, Const, Value};

pub(crate) const KEYWORDS: [&str; 13] = [
    "let", "in", "if", "then", "else", "for", "where", "return", "union", "sum", "empty", "true", "false",
];

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PExpr = Arc<Expr>;

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::parse(t.line, t.col, msg))
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Underscore => "`_`".into(),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.next();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", self.describe()))
        }
    }

    pub(crate) fn expect_eof(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err(format!("unexpected {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(s)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    // Expressions. `no_gt` is set inside record literals, where `>` closes
    // the record; comparisons with `>` there need parentheses.

    pub(crate) fn expr(&mut self, no_gt: bool) -> Result<PExpr> {
        if self.eat_kw("let") {
            let x = self.ident()?;
            self.expect_sym("=")?;
            let e1 = self.expr(false)?;
            self.expect_kw("in")?;
            let e2 = self.expr(no_gt)?;
            return Ok(Arc::new(Expr::Let(name(&x), e1, e2)));
        }
        if self.eat_kw("if") {
            let c = self.expr(false)?;
            self.expect_kw("then")?;
            let a = self.expr(false)?;
            self.expect_kw("else")?;
            let b = self.expr(no_gt)?;
            return Ok(Arc::new(Expr::If(c, a, b)));
        }
        if self.eat_kw("for") {
            return self.for_expr(no_gt);
        }
        self.binary(1, no_gt)
    }

    /// `for x in e, ... where c, ... return e` desugars to nested
    /// comprehensions around nested conditionals.
    fn for_expr(&mut self, no_gt: bool) -> Result<PExpr> {
        let mut gens = Vec::new();
        loop {
            let x = self.ident()?;
            self.expect_kw("in")?;
            gens.push((x, self.binary(1, false)?));
            if !self.eat_sym(",") {
                break;
            }
        }
        let mut conds = Vec::new();
        if self.eat_kw("where") {
            loop {
                conds.push(self.binary(1, false)?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_kw("return")?;
        let ret = self.expr(no_gt)?;
        let mut body = Arc::new(Expr::Singleton(ret));
        for c in conds.into_iter().rev() {
            body = Arc::new(Expr::If(c, body, Arc::new(Expr::Empty(None))));
        }
        for (x, src) in gens.into_iter().rev() {
            body = Arc::new(Expr::Comp {
                body,
                var: name(&x),
                source: src,
            });
        }
        Ok(body)
    }

    fn binop(&self, level: u8, no_gt: bool) -> Option<PrimOp> {
        let s = match self.peek() {
            Tok::Sym(s) => *s,
            _ => return None,
        };
        let op = PrimOp::from_symbol(s)?;
        if no_gt && matches!(op, PrimOp::Gt | PrimOp::Ge) {
            return None;
        }
        (prec(op) == level && op != PrimOp::Not).then_some(op)
    }

    fn binary(&mut self, level: u8, no_gt: bool) -> Result<PExpr> {
        if level > 5 {
            return self.unary(no_gt);
        }
        let mut lhs = self.binary(level + 1, no_gt)?;
        while let Some(op) = self.binop(level, no_gt) {
            self.next();
            let rhs = self.binary(level + 1, no_gt)?;
            lhs = Arc::new(Expr::Prim(op, vec![lhs, rhs]));
            if level == 3 {
                if self.binop(level, no_gt).is_some() {
                    return self.err("comparisons do not chain; add parentheses");
                }
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self, no_gt: bool) -> Result<PExpr> {
        if self.eat_sym("!") {
            return Ok(Arc::new(Expr::Prim(PrimOp::Not, vec![self.unary(no_gt)?])));
        }
        if self.eat_kw("sum") {
            return Ok(Arc::new(Expr::Sum(self.unary(no_gt)?)));
        }
        if self.eat_kw("empty") {
            return Ok(Arc::new(Expr::IsEmpty(self.unary(no_gt)?)));
        }
        let mut e = self.atom()?;
        while self.is_sym(".") {
            self.next();
            let a = self.ident()?;
            e = Arc::new(Expr::Field(e, name(&a)));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<PExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Arc::new(Expr::Const(Const::Int(self.to_int(n, false)?))))
            }
            Tok::Sym("-") if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.next();
                let Tok::Int(n) = self.next() else { unreachable!() };
                Ok(Arc::new(Expr::Const(Const::Int(self.to_int(n, true)?))))
            }
            Tok::Underscore => {
                self.next();
                Ok(Arc::new(Expr::Hole))
            }
            Tok::Ident(k) if k == "true" || k == "false" => {
                self.next();
                Ok(Arc::new(Expr::Const(Const::Bool(k == "true"))))
            }
            Tok::Ident(k) if k == "union" => {
                self.next();
                self.expect_sym("{")?;
                let first = self.expr(false)?;
                if self.eat_sym("|") {
                    let x = self.ident()?;
                    self.expect_kw("in")?;
                    let src = self.expr(false)?;
                    self.expect_sym("}")?;
                    return Ok(Arc::new(Expr::Comp {
                        body: first,
                        var: name(&x),
                        source: src,
                    }));
                }
                self.expect_sym(",")?;
                let second = self.expr(false)?;
                self.expect_sym("}")?;
                Ok(Arc::new(Expr::Union(first, second)))
            }
            Tok::Ident(_) => Ok(Arc::new(Expr::Var(name(&self.ident()?)))),
            Tok::Sym("(") => {
                self.next();
                let e = self.expr(false)?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("{") => {
                self.next();
                if self.eat_sym("}") {
                    if self.eat_sym(":") {
                        return Ok(Arc::new(Expr::Empty(Some(self.ty()?))));
                    }
                    return Ok(Arc::new(Expr::Empty(None)));
                }
                let e = self.expr(false)?;
                self.expect_sym("}")?;
                Ok(Arc::new(Expr::Singleton(e)))
            }
            Tok::Sym("<") => {
                self.next();
                let mut fields: Vec<(crate::value::Name, PExpr)> = Vec::new();
                if !self.is_sym(">") {
                    loop {
                        let a = self.ident()?;
                        self.expect_sym(":")?;
                        let e = self.expr(true)?;
                        if fields.iter().any(|(b, _)| **b == *a) {
                            return self.err(format!("duplicate field {a}"));
                        }
                        fields.push((name(&a), e));
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym(">")?;
                Ok(Arc::new(Expr::Record(fields)))
            }
            _ => self.err(format!("expected an expression, found {}", self.describe())),
        }
    }

    fn to_int(&self, n: u64, neg: bool) -> Result<i64> {
        let v = if neg {
            0i64.checked_sub_unsigned(n)
        } else {
            i64::try_from(n).ok()
        };
        match v {
            Some(v) => Ok(v),
            None => self.err("integer out of range"),
        }
    }

    pub(crate) fn ty(&mut self) -> Result<Type> {
        if self.eat_kw("int") {
            return Ok(Type::Int);
        }
        if self.eat_kw("bool") {
            return Ok(Type::Bool);
        }
        if self.eat_sym("{") {
            let t = self.ty()?;
            self.expect_sym("}")?;
            return Ok(Type::set(t));
        }
        if self.eat_sym("<") {
            let mut fs = BTreeMap::new();
            if !self.is_sym(">") {
                loop {
                    let a = self.ident()?;
                    self.expect_sym(":")?;
                    let t = self.ty()?;
                    if fs.insert(name(&a), t).is_some() {
                        return self.err(format!("duplicate field {a}"));
                    }
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.expect_sym(">")?;
            return Ok(Type::Record(fs));
        }
        self.err(format!("expected a type, found {}", self.describe()))
    }

    fn tail(&mut self) -> Result<Tail> {
        match self.next() {
            Tok::Underscore => Ok(Tail::Hole),
            Tok::Sym("*") => Ok(Tail::Diamond),
            _ => {
                self.pos -= 1;
                self.err(format!("expected `_` or `*`, found {}", self.describe()))
            }
        }
    }

    fn label(&mut self) -> Result<Label> {
        self.expect_sym("[")?;
        let mut atoms = Vec::new();
        if !self.is_sym("]") {
            loop {
                match self.next() {
                    Tok::Int(n) => atoms.push(Atom::Nat(n)),
                    Tok::Ident(s) => match Atom::name(&s) {
                        Ok(a) => atoms.push(a),
                        Err(_) => {
                            self.pos -= 1;
                            return self.err(format!("invalid label atom {s}"));
                        }
                    },
                    _ => {
                        self.pos -= 1;
                        return self.err(format!("expected a label atom, found {}", self.describe()));
                    }
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(Label::new(atoms))
    }

    pub(crate) fn pattern(&mut self) -> Result<Pattern> {
        match self.peek().clone() {
            Tok::Underscore => {
                self.next();
                Ok(Pattern::Hole)
            }
            Tok::Sym("*") => {
                self.next();
                Ok(Pattern::Diamond)
            }
            Tok::Int(n) => {
                self.next();
                Ok(Pattern::int(self.to_int(n, false)?))
            }
            Tok::Sym("-") if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.next();
                let Tok::Int(n) = self.next() else { unreachable!() };
                Ok(Pattern::int(self.to_int(n, true)?))
            }
            Tok::Ident(k) if k == "true" || k == "false" => {
                self.next();
                Ok(Pattern::bool(k == "true"))
            }
            Tok::Sym("<") => {
                self.next();
                let mut fs = BTreeMap::new();
                let mut tail = Tail::Closed;
                if !self.is_sym(">") && !self.is_sym(";") {
                    loop {
                        let a = self.ident()?;
                        self.expect_sym(":")?;
                        let p = self.pattern()?;
                        if fs.insert(name(&a), p).is_some() {
                            return self.err(format!("duplicate field {a}"));
                        }
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                if self.eat_sym(";") {
                    tail = self.tail()?;
                }
                self.expect_sym(">")?;
                Ok(Pattern::Record(fs, tail))
            }
            Tok::Sym("{") => {
                self.next();
                let mut es = BTreeMap::new();
                if !self.is_sym("}") {
                    loop {
                        let l = self.label()?;
                        self.expect_sym(".")?;
                        let p = self.pattern()?;
                        if es.insert(l.clone(), p).is_some() {
                            return self.err(format!("duplicate label {l}"));
                        }
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("}")?;
                if !is_prefix_code(es.keys()) {
                    return self.err("element labels do not form a prefix code");
                }
                let tail = if self.eat_kw("U") { self.tail()? } else { Tail::Closed };
                Ok(Pattern::set(es, tail))
            }
            _ => self.err(format!("expected a pattern, found {}", self.describe())),
        }
    }

    pub(crate) fn value(&mut self) -> Result<Value> {
        let start = self.pos;
        let p = self.pattern()?;
        match p.to_value() {
            Some(v) => Ok(v),
            None => {
                self.pos = start;
                self.err("values cannot contain `_`, `*` or open tails")
            }
        }
    }
}

pub(crate) fn prec(op: PrimOp) -> u8 {
    use PrimOp::*;
    match op {
        Or => 1,
        And => 2,
        Eq | Ne | Lt | Le | Gt | Ge => 3,
        Add | Sub => 4,
        Mul | Div | Mod => 5,
        Not => 6,
    }
}

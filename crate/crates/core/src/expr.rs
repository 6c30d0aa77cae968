use std::collections::BTreeMap;
use std::sync::Arc;

use crate::value::{Const, Name};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Int,
    Bool,
    Record(BTreeMap<Name, Type>),
    Set(Box<Type>),
}

impl Type {
    pub fn set(t: Type) -> Type {
        Type::Set(Box::new(t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
}

impl PrimOp {
    pub const ALL: [PrimOp; 14] = [
        PrimOp::Add,
        PrimOp::Sub,
        PrimOp::Mul,
        PrimOp::Div,
        PrimOp::Mod,
        PrimOp::Eq,
        PrimOp::Ne,
        PrimOp::Lt,
        PrimOp::Le,
        PrimOp::Gt,
        PrimOp::Ge,
        PrimOp::And,
        PrimOp::Or,
        PrimOp::Not,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            PrimOp::Add => "+",
            PrimOp::Sub => "-",
            PrimOp::Mul => "*",
            PrimOp::Div => "/",
            PrimOp::Mod => "%",
            PrimOp::Eq => "=",
            PrimOp::Ne => "!=",
            PrimOp::Lt => "<",
            PrimOp::Le => "<=",
            PrimOp::Gt => ">",
            PrimOp::Ge => ">=",
            PrimOp::And => "&&",
            PrimOp::Or => "||",
            PrimOp::Not => "!",
        }
    }

    pub fn from_symbol(s: &str) -> Option<PrimOp> {
        PrimOp::ALL.into_iter().find(|op| op.symbol() == s)
    }

    pub fn arity(self) -> usize {
        if self == PrimOp::Not {
            1
        } else {
            2
        }
    }

    /// Argument and result types.
    pub fn signature(self) -> (Type, Type) {
        use PrimOp::*;
        match self {
            Add | Sub | Mul | Div | Mod => (Type::Int, Type::Int),
            Eq | Ne | Lt | Le | Gt | Ge => (Type::Int, Type::Bool),
            And | Or | Not => (Type::Bool, Type::Bool),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Const),
    Prim(PrimOp, Vec<Arc<Expr>>),
    Var(Name),
    Let(Name, Arc<Expr>, Arc<Expr>),
    Record(Vec<(Name, Arc<Expr>)>),
    Field(Arc<Expr>, Name),
    If(Arc<Expr>, Arc<Expr>, Arc<Expr>),
    Empty(Option<Type>),
    Singleton(Arc<Expr>),
    Union(Arc<Expr>, Arc<Expr>),
    /// `⋃{body | var ∈ source}`
    Comp {
        body: Arc<Expr>,
        var: Name,
        source: Arc<Expr>,
    },
    Sum(Arc<Expr>),
    IsEmpty(Arc<Expr>),
    Hole,
}

impl Expr {
    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) | Expr::Empty(_) | Expr::Hole => 1,
            Expr::Prim(_, args) => 1 + args.iter().map(|a| a.size()).sum::<usize>(),
            Expr::Let(_, a, b) | Expr::Union(a, b) => 1 + a.size() + b.size(),
            Expr::Record(fs) => 1 + fs.iter().map(|(_, e)| e.size()).sum::<usize>(),
            Expr::Field(e, _) | Expr::Singleton(e) | Expr::Sum(e) | Expr::IsEmpty(e) => 1 + e.size(),
            Expr::If(a, b, c) => 1 + a.size() + b.size() + c.size(),
            Expr::Comp { body, source, .. } => 1 + body.size() + source.size(),
        }
    }

    pub fn has_holes(&self) -> bool {
        match self {
            Expr::Hole => true,
            Expr::Const(_) | Expr::Var(_) | Expr::Empty(_) => false,
            Expr::Prim(_, args) => args.iter().any(|a| a.has_holes()),
            Expr::Let(_, a, b) | Expr::Union(a, b) => a.has_holes() || b.has_holes(),
            Expr::Record(fs) => fs.iter().any(|(_, e)| e.has_holes()),
            Expr::Field(e, _) | Expr::Singleton(e) | Expr::Sum(e) | Expr::IsEmpty(e) => e.has_holes(),
            Expr::If(a, b, c) => a.has_holes() || b.has_holes() || c.has_holes(),
            Expr::Comp { body, source, .. } => body.has_holes() || source.has_holes(),
        }
    }
}

/// Small constructors used by tests and the generators.
pub mod build {
    use super::*;
    use crate::value::name;

    pub fn int(n: i64) -> Arc<Expr> {
        Arc::new(Expr::Const(Const::Int(n)))
    }
    pub fn boolean(b: bool) -> Arc<Expr> {
        Arc::new(Expr::Const(Const::Bool(b)))
    }
    pub fn var(x: &str) -> Arc<Expr> {
        Arc::new(Expr::Var(name(x)))
    }
    pub fn prim(op: PrimOp, args: Vec<Arc<Expr>>) -> Arc<Expr> {
        Arc::new(Expr::Prim(op, args))
    }
    pub fn bin(op: PrimOp, a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        prim(op, vec![a, b])
    }
    pub fn field(e: Arc<Expr>, a: &str) -> Arc<Expr> {
        Arc::new(Expr::Field(e, name(a)))
    }
    pub fn record(fs: Vec<(&str, Arc<Expr>)>) -> Arc<Expr> {
        Arc::new(Expr::Record(fs.into_iter().map(|(k, e)| (name(k), e)).collect()))
    }
    pub fn ite(c: Arc<Expr>, a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::If(c, a, b))
    }
    pub fn empty() -> Arc<Expr> {
        Arc::new(Expr::Empty(None))
    }
    pub fn sng(e: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Singleton(e))
    }
    pub fn union(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Union(a, b))
    }
    pub fn comp(body: Arc<Expr>, x: &str, source: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Comp {
            body,
            var: name(x),
            source,
        })
    }
    pub fn hole() -> Arc<Expr> {
        Arc::new(Expr::Hole)
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::label::{clashes, is_prefix_code, Label};

/// Variable and field names.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    Int(i64),
    Bool(bool),
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Int(n) => write!(f, "{n}"),
            Const::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Const(Const),
    Record(BTreeMap<Name, Value>),
    Coll(BTreeMap<Label, Value>),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Const(Const::Int(n))
    }

    pub fn bool(b: bool) -> Value {
        Value::Const(Const::Bool(b))
    }

    pub fn empty() -> Value {
        Value::Coll(BTreeMap::new())
    }

    pub fn record<'a>(fields: impl IntoIterator<Item = (&'a str, Value)>) -> Value {
        Value::Record(fields.into_iter().map(|(k, v)| (name(k), v)).collect())
    }

    /// Builds a collection, rejecting label sets that are not prefix codes.
    pub fn coll(elems: impl IntoIterator<Item = (Label, Value)>) -> Result<Value> {
        let mut map = BTreeMap::new();
        for (l, v) in elems {
            if map.insert(l, v).is_some() {
                return Err(Error::NotPrefixCode);
            }
        }
        if !is_prefix_code(map.keys()) {
            return Err(Error::NotPrefixCode);
        }
        Ok(Value::Coll(map))
    }

    pub fn as_coll(&self) -> Option<&BTreeMap<Label, Value>> {
        match self {
            Value::Coll(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_record(&self) -> Option<&BTreeMap<Name, Value>> {
        match self {
            Value::Record(m) => Some(m),
            _ => None,
        }
    }

    /// True when every collection inside the value has a prefix-code domain.
    pub fn is_prefix_labeled(&self) -> bool {
        match self {
            Value::Const(_) => true,
            Value::Record(fs) => fs.values().all(Value::is_prefix_labeled),
            Value::Coll(m) => is_prefix_code(m.keys()) && m.values().all(Value::is_prefix_labeled),
        }
    }

    /// Number of constructors in the value.
    pub fn size(&self) -> usize {
        match self {
            Value::Const(_) => 1,
            Value::Record(fs) => 1 + fs.values().map(Value::size).sum::<usize>(),
            Value::Coll(m) => 1 + m.values().map(Value::size).sum::<usize>(),
        }
    }
}

/// `ℓ·v`: puts `label` in front of every label of a collection.
pub fn prepend_label(label: &Label, v: Value) -> Result<Value> {
    match v {
        Value::Coll(m) => Ok(Value::Coll(
            m.into_iter().map(|(l, x)| (label.concat(&l), x)).collect(),
        )),
        _ => Err(Error::Stuck("label prepended to a non-collection".into())),
    }
}

/// `v1 ⊎ v2`: union of collections whose label sets are prefix-disjoint.
pub fn disjoint_union(v1: Value, v2: Value) -> Result<Value> {
    match (v1, v2) {
        (Value::Coll(mut a), Value::Coll(b)) => {
            if a.len() < b.len() {
                return disjoint_union(Value::Coll(b), Value::Coll(a));
            }
            for (l, x) in b {
                if clashes(&a, &l) {
                    return Err(Error::DomainOverlap);
                }
                a.insert(l, x);
            }
            Ok(Value::Coll(a))
        }
        _ => Err(Error::Stuck("union of non-collections".into())),
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Const(c) => write!(f, "{c}"),
            Value::Record(fs) => {
                f.write_str("<")?;
                for (i, (k, v)) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str(">")
            }
            Value::Coll(m) => {
                f.write_str("{")?;
                for (i, (l, v)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{l}.{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Variable environment γ.
pub type Env = BTreeMap<Name, Value>;

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Label {
        Label::parse(s).unwrap()
    }

    #[test]
    fn prepend_and_union() {
        let v = Value::coll([(l("a"), Value::int(1))]).unwrap();
        let w = prepend_label(&l("1"), v.clone()).unwrap();
        assert_eq!(w, Value::coll([(l("1,a"), Value::int(1))]).unwrap());
        let u = disjoint_union(w.clone(), prepend_label(&l("2"), v.clone()).unwrap()).unwrap();
        assert_eq!(u.as_coll().unwrap().len(), 2);
        assert_eq!(disjoint_union(w.clone(), w.clone()), Err(Error::DomainOverlap));
        let eps = Value::coll([(Label::empty(), Value::int(7))]).unwrap();
        assert_eq!(disjoint_union(eps, v), Err(Error::DomainOverlap));
    }

    #[test]
    fn coll_rejects_prefix_clash() {
        assert_eq!(
            Value::coll([(l("a"), Value::int(1)), (l("a,b"), Value::int(2))]),
            Err(Error::NotPrefixCode)
        );
    }

    #[test]
    fn display() {
        let v = Value::coll([(
            l("r1"),
            Value::record([("A", Value::int(1)), ("B", Value::bool(true))]),
        )])
        .unwrap();
        assert_eq!(v.to_string(), "{[r1].<A: 1, B: true>}");
    }
}

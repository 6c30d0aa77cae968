use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::label::{clashes, is_prefix_code, Label};
use crate::value::{Const, Name, Value};

/// How the unlisted part of a record or collection pattern is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tail {
    /// Nothing beyond the listed entries.
    Closed,
    /// `∪̇□`: anything may follow.
    Hole,
    /// `∪̇◇`: whatever follows must stay equal.
    Diamond,
}

impl Tail {
    fn meet(self, other: Tail) -> Tail {
        match (self, other) {
            (Tail::Closed, _) | (_, Tail::Closed) => Tail::Closed,
            (Tail::Diamond, _) | (_, Tail::Diamond) => Tail::Diamond,
            _ => Tail::Hole,
        }
    }

    fn as_pattern(self) -> Pattern {
        match self {
            Tail::Closed => Pattern::Set(BTreeMap::new(), Tail::Closed),
            Tail::Hole => Pattern::Hole,
            Tail::Diamond => Pattern::Diamond,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Hole,
    Diamond,
    Const(Const),
    Record(BTreeMap<Name, Pattern>, Tail),
    Set(BTreeMap<Label, Pattern>, Tail),
}

impl Pattern {
    pub fn int(n: i64) -> Pattern {
        Pattern::Const(Const::Int(n))
    }

    pub fn bool(b: bool) -> Pattern {
        Pattern::Const(Const::Bool(b))
    }

    pub fn empty_set() -> Pattern {
        Pattern::Set(BTreeMap::new(), Tail::Closed)
    }

    /// Collection pattern in normal form: `{} ∪̇ □` is `□`, `{} ∪̇ ◇` is `◇`.
    pub fn set(elems: BTreeMap<Label, Pattern>, tail: Tail) -> Pattern {
        if elems.is_empty() {
            tail.as_pattern()
        } else {
            Pattern::Set(elems, tail)
        }
    }

    /// Checked constructor: the element labels must form a prefix code.
    pub fn try_set(elems: impl IntoIterator<Item = (Label, Pattern)>, tail: Tail) -> Result<Pattern> {
        let mut m = BTreeMap::new();
        for (l, p) in elems {
            if m.insert(l, p).is_some() {
                return Err(Error::NotPrefixCode);
            }
        }
        if !is_prefix_code(m.keys()) {
            return Err(Error::NotPrefixCode);
        }
        Ok(Pattern::set(m, tail))
    }

    pub fn record<'a>(fields: impl IntoIterator<Item = (&'a str, Pattern)>, tail: Tail) -> Pattern {
        Pattern::Record(
            fields.into_iter().map(|(k, p)| (Name::from(k), p)).collect(),
            tail,
        )
    }

    /// `v̂`: the pattern that only matches `v` and asks for all of it.
    pub fn from_value(v: &Value) -> Pattern {
        match v {
            Value::Const(c) => Pattern::Const(*c),
            Value::Record(fs) => Pattern::Record(
                fs.iter().map(|(k, v)| (k.clone(), Pattern::from_value(v))).collect(),
                Tail::Closed,
            ),
            Value::Coll(m) => Pattern::Set(
                m.iter().map(|(l, v)| (l.clone(), Pattern::from_value(v))).collect(),
                Tail::Closed,
            ),
        }
    }

    /// The value a hole- and diamond-free pattern denotes.
    pub fn to_value(&self) -> Option<Value> {
        match self {
            Pattern::Const(c) => Some(Value::Const(*c)),
            Pattern::Record(fs, Tail::Closed) => Some(Value::Record(
                fs.iter()
                    .map(|(k, p)| p.to_value().map(|v| (k.clone(), v)))
                    .collect::<Option<_>>()?,
            )),
            Pattern::Set(m, Tail::Closed) => Some(Value::Coll(
                m.iter()
                    .map(|(l, p)| p.to_value().map(|v| (l.clone(), v)))
                    .collect::<Option<_>>()?,
            )),
            _ => None,
        }
    }

    /// True for the collection-shaped patterns: `□`, `◇` and set patterns.
    pub fn is_set_like(&self) -> bool {
        matches!(self, Pattern::Hole | Pattern::Diamond | Pattern::Set(..))
    }

    /// Constructor count, with holes and diamonds counting one.
    pub fn size(&self) -> usize {
        match self {
            Pattern::Hole | Pattern::Diamond | Pattern::Const(_) => 1,
            Pattern::Record(fs, _) => 1 + fs.values().map(Pattern::size).sum::<usize>(),
            Pattern::Set(m, _) => 1 + m.values().map(Pattern::size).sum::<usize>(),
        }
    }
}

fn mismatch() -> Error {
    Error::Incompatible
}

/// Merges the entries of two record or collection patterns.
fn lub_entries<K: Ord + Clone>(
    a: &BTreeMap<K, Pattern>,
    ta: Tail,
    b: &BTreeMap<K, Pattern>,
    tb: Tail,
) -> Result<BTreeMap<K, Pattern>> {
    let mut out = BTreeMap::new();
    for (k, p) in a {
        match b.get(k) {
            Some(q) => {
                out.insert(k.clone(), lub(p, q)?);
            }
            None => {
                let p = match tb {
                    Tail::Closed => return Err(mismatch()),
                    Tail::Hole => p.clone(),
                    Tail::Diamond => diamondize(p),
                };
                out.insert(k.clone(), p);
            }
        }
    }
    for (k, q) in b {
        if !a.contains_key(k) {
            let q = match ta {
                Tail::Closed => return Err(mismatch()),
                Tail::Hole => q.clone(),
                Tail::Diamond => diamondize(q),
            };
            out.insert(k.clone(), q);
        }
    }
    Ok(out)
}

/// `p ⊔ q`: the least pattern above both. Fails when no value matches both.
pub fn lub(p: &Pattern, q: &Pattern) -> Result<Pattern> {
    Ok(match (p, q) {
        (Pattern::Hole, x) | (x, Pattern::Hole) => x.clone(),
        (Pattern::Diamond, x) | (x, Pattern::Diamond) => diamondize(x),
        (Pattern::Const(a), Pattern::Const(b)) if a == b => p.clone(),
        (Pattern::Record(f, tf), Pattern::Record(g, tg)) => {
            Pattern::Record(lub_entries(f, *tf, g, *tg)?, tf.meet(*tg))
        }
        (Pattern::Set(f, tf), Pattern::Set(g, tg)) => {
            let m = lub_entries(f, *tf, g, *tg)?;
            if m.len() != f.len().max(g.len()) && !is_prefix_code(m.keys()) {
                return Err(mismatch());
            }
            Pattern::set(m, tf.meet(*tg))
        }
        _ => return Err(mismatch()),
    })
}

/// `p ⊑ q`.
pub fn leq(p: &Pattern, q: &Pattern) -> bool {
    lub(p, q).is_ok_and(|r| &r == q)
}

/// True when `v` is one of the values described by `p` (`p ⊑ v̂`).
pub fn matches(p: &Pattern, v: &Value) -> bool {
    match (p, v) {
        (Pattern::Hole | Pattern::Diamond, _) => true,
        (Pattern::Const(c), Value::Const(d)) => c == d,
        (Pattern::Record(fs, tail), Value::Record(vs)) => {
            fs.iter().all(|(k, p)| vs.get(k).is_some_and(|v| matches(p, v)))
                && (*tail != Tail::Closed || fs.len() == vs.len())
        }
        (Pattern::Set(es, tail), Value::Coll(vs)) => {
            es.iter().all(|(l, p)| vs.get(l).is_some_and(|v| matches(p, v)))
                && (*tail != Tail::Closed || es.len() == vs.len())
        }
        _ => false,
    }
}

/// Replaces every `□`, including tails, by `◇`.
pub fn diamondize(p: &Pattern) -> Pattern {
    let tail = |t: Tail| if t == Tail::Hole { Tail::Diamond } else { t };
    match p {
        Pattern::Hole | Pattern::Diamond => Pattern::Diamond,
        Pattern::Const(c) => Pattern::Const(*c),
        Pattern::Record(fs, t) => Pattern::Record(
            fs.iter().map(|(k, p)| (k.clone(), diamondize(p))).collect(),
            tail(*t),
        ),
        Pattern::Set(m, t) => Pattern::Set(
            m.iter().map(|(l, p)| (l.clone(), diamondize(p))).collect(),
            tail(*t),
        ),
    }
}

/// `v ≃ₚ v'`: the two values agree on the part `p` asks for.
pub fn equiv_at(p: &Pattern, v: &Value, w: &Value) -> bool {
    fn rest<K: Ord, V: PartialEq>(listed: &BTreeMap<K, Pattern>, a: &BTreeMap<K, V>, b: &BTreeMap<K, V>) -> bool {
        let ra = a.iter().filter(|(k, _)| !listed.contains_key(*k));
        let rb = b.iter().filter(|(k, _)| !listed.contains_key(*k));
        ra.eq(rb)
    }
    match p {
        Pattern::Hole => true,
        Pattern::Diamond => v == w,
        Pattern::Const(c) => matches!((v, w), (Value::Const(a), Value::Const(b)) if a == c && b == c),
        Pattern::Record(fs, tail) => match (v, w) {
            (Value::Record(a), Value::Record(b)) => {
                fs.iter().all(|(k, p)| match (a.get(k), b.get(k)) {
                    (Some(x), Some(y)) => equiv_at(p, x, y),
                    _ => false,
                }) && match tail {
                    Tail::Closed => a.len() == fs.len() && b.len() == fs.len(),
                    Tail::Hole => true,
                    Tail::Diamond => rest(fs, a, b),
                }
            }
            _ => false,
        },
        Pattern::Set(es, tail) => match (v, w) {
            (Value::Coll(a), Value::Coll(b)) => {
                es.iter().all(|(l, p)| match (a.get(l), b.get(l)) {
                    (Some(x), Some(y)) => equiv_at(p, x, y),
                    _ => false,
                }) && match tail {
                    Tail::Closed => a.len() == es.len() && b.len() == es.len(),
                    Tail::Hole => true,
                    Tail::Diamond => rest(es, a, b),
                }
            }
            _ => false,
        },
    }
}

/// `p ⊎ q` on collection patterns with prefix-disjoint labels.
pub fn pattern_union(p: &Pattern, q: &Pattern) -> Result<Pattern> {
    let parts = |x: &Pattern| -> Result<(BTreeMap<Label, Pattern>, Tail)> {
        match x {
            Pattern::Hole => Ok((BTreeMap::new(), Tail::Hole)),
            Pattern::Diamond => Ok((BTreeMap::new(), Tail::Diamond)),
            Pattern::Set(m, t) => Ok((m.clone(), *t)),
            _ => Err(Error::Shape("union of a non-collection pattern".into())),
        }
    };
    let (mut a, ta) = parts(p)?;
    let (b, tb) = parts(q)?;
    if a.len() < b.len() {
        return pattern_union(q, p);
    }
    for (l, x) in b {
        if clashes(&a, &l) {
            return Err(Error::DomainOverlap);
        }
        a.insert(l, x);
    }
    let tail = match (ta, tb) {
        (Tail::Closed, t) | (t, Tail::Closed) => t,
        (Tail::Hole, _) | (_, Tail::Hole) => Tail::Hole,
        _ => Tail::Diamond,
    };
    Ok(Pattern::set(a, tail))
}

/// `p.ε`: the element pattern of a singleton.
pub fn singleton_extract(p: &Pattern) -> Result<Pattern> {
    match p {
        Pattern::Hole | Pattern::Diamond => Ok(p.clone()),
        Pattern::Set(m, _) => match m.get(&Label::empty()) {
            Some(q) => Ok(q.clone()),
            None => Err(Error::PatternMismatch(
                "singleton pattern without an [] element".into(),
            )),
        },
        _ => Err(Error::Shape("singleton slice with a non-collection pattern".into())),
    }
}

/// `p[ℓ]`: the elements under `ℓ` with `ℓ` removed, keeping the tail.
pub fn label_project(p: &Pattern, label: &Label) -> Result<Pattern> {
    match p {
        Pattern::Hole | Pattern::Diamond => Ok(p.clone()),
        Pattern::Set(m, t) => Ok(Pattern::set(
            m.iter()
                .filter_map(|(l, q)| label.strip_from(l).map(|r| (r, q.clone())))
                .collect(),
            *t,
        )),
        _ => Err(Error::Shape("label projection of a non-collection pattern".into())),
    }
}

/// `p|L`: the elements whose label has a prefix in `labels`, keeping the tail.
pub fn restrict(p: &Pattern, labels: &[Label]) -> Result<Pattern> {
    match p {
        Pattern::Hole | Pattern::Diamond => Ok(p.clone()),
        Pattern::Set(m, t) => Ok(Pattern::set(
            m.iter()
                .filter(|(l, _)| labels.iter().any(|k| k.is_prefix_of(l)))
                .map(|(l, q)| (l.clone(), q.clone()))
                .collect(),
            *t,
        )),
        _ => Err(Error::Shape("restriction of a non-collection pattern".into())),
    }
}

/// `p.A`. An unlisted field of an open record is `□` or `◇` after its tail.
pub fn field_project(p: &Pattern, a: &str) -> Result<Pattern> {
    match p {
        Pattern::Hole | Pattern::Diamond => Ok(p.clone()),
        Pattern::Record(fs, t) => match fs.get(a) {
            Some(q) => Ok(q.clone()),
            None => match t {
                Tail::Hole => Ok(Pattern::Hole),
                Tail::Diamond => Ok(Pattern::Diamond),
                Tail::Closed => Err(Error::PatternMismatch(format!("record pattern has no field {a}"))),
            },
        },
        _ => Err(Error::Shape(format!("projection .{a} of a non-record pattern"))),
    }
}

/// `ℓ·p`.
pub fn prepend_pattern(label: &Label, p: &Pattern) -> Result<Pattern> {
    match p {
        Pattern::Hole | Pattern::Diamond => Ok(p.clone()),
        Pattern::Set(m, t) => Ok(Pattern::Set(
            m.iter().map(|(l, q)| (label.concat(l), q.clone())).collect(),
            *t,
        )),
        _ => Err(Error::Shape("label prepended to a non-collection pattern".into())),
    }
}

/// Replaces each `◇` by the part of `v` it stands for, so that the result
/// relates exactly the same values to `v` as `p` does.
pub fn resolve(p: &Pattern, v: &Value) -> Pattern {
    fn fill<K: Ord + Clone>(
        es: &BTreeMap<K, Pattern>,
        tail: Tail,
        vs: &BTreeMap<K, Value>,
    ) -> (BTreeMap<K, Pattern>, Tail) {
        let mut out: BTreeMap<K, Pattern> = es
            .iter()
            .map(|(k, q)| {
                let r = match vs.get(k) {
                    Some(x) => resolve(q, x),
                    None => q.clone(),
                };
                (k.clone(), r)
            })
            .collect();
        if tail == Tail::Diamond {
            for (k, x) in vs {
                out.entry(k.clone()).or_insert_with(|| Pattern::from_value(x));
            }
            (out, Tail::Closed)
        } else {
            (out, tail)
        }
    }
    match (p, v) {
        (Pattern::Diamond, _) => Pattern::from_value(v),
        (Pattern::Record(fs, t), Value::Record(vs)) => {
            let (m, t) = fill(fs, *t, vs);
            Pattern::Record(m, t)
        }
        (Pattern::Set(es, t), Value::Coll(vs)) => {
            let (m, t) = fill(es, *t, vs);
            Pattern::Set(m, t)
        }
        _ => p.clone(),
    }
}

/// Pattern environment ρ. Absent variables stand for `□`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternEnv(BTreeMap<Name, Pattern>);

impl PatternEnv {
    pub fn new() -> PatternEnv {
        PatternEnv::default()
    }

    pub fn singleton(x: Name, p: Pattern) -> PatternEnv {
        let mut e = PatternEnv::new();
        e.insert(x, p);
        e
    }

    pub fn insert(&mut self, x: Name, p: Pattern) {
        if p == Pattern::Hole {
            self.0.remove(&x);
        } else {
            self.0.insert(x, p);
        }
    }

    pub fn get(&self, x: &str) -> Pattern {
        self.0.get(x).cloned().unwrap_or(Pattern::Hole)
    }

    /// Removes `x`, returning its pattern.
    pub fn take(&mut self, x: &str) -> Pattern {
        self.0.remove(x).unwrap_or(Pattern::Hole)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Pattern)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl FromIterator<(Name, Pattern)> for PatternEnv {
    fn from_iter<I: IntoIterator<Item = (Name, Pattern)>>(iter: I) -> PatternEnv {
        let mut e = PatternEnv::new();
        for (x, p) in iter {
            e.insert(x, p);
        }
        e
    }
}

/// Pointwise `⊔`.
pub fn lub_env(a: &PatternEnv, b: &PatternEnv) -> Result<PatternEnv> {
    let mut out = a.clone();
    for (x, p) in &b.0 {
        let q = match a.0.get(x) {
            Some(q) => lub(q, p)?,
            None => p.clone(),
        };
        out.insert(x.clone(), q);
    }
    Ok(out)
}

/// Moves `b` into `a`, joining shared variables.
pub(crate) fn absorb_env(a: &mut PatternEnv, b: PatternEnv) -> Result<()> {
    for (x, p) in b.0 {
        let q = match a.0.remove(&x) {
            Some(q) => lub(&q, &p)?,
            None => p,
        };
        a.insert(x, q);
    }
    Ok(())
}

/// Pointwise `⊑`.
pub fn leq_env(a: &PatternEnv, b: &PatternEnv) -> bool {
    a.0.iter().all(|(x, p)| leq(p, &b.get(x)))
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Closed => Ok(()),
            Tail::Hole => f.write_str("_"),
            Tail::Diamond => f.write_str("*"),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Hole => f.write_str("_"),
            Pattern::Diamond => f.write_str("*"),
            Pattern::Const(c) => write!(f, "{c}"),
            Pattern::Record(fs, t) => {
                f.write_str("<")?;
                for (i, (k, p)) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {p}")?;
                }
                if *t != Tail::Closed {
                    write!(f, "; {t}")?;
                }
                f.write_str(">")
            }
            Pattern::Set(m, t) => {
                f.write_str("{")?;
                for (i, (l, p)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{l}.{p}")?;
                }
                f.write_str("}")?;
                if *t != Tail::Closed {
                    write!(f, " U {t}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for PatternEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, p)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {p}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Label {
        Label::parse(s).unwrap()
    }

    fn set(es: Vec<(&str, Pattern)>, t: Tail) -> Pattern {
        Pattern::try_set(es.into_iter().map(|(k, p)| (l(k), p)), t).unwrap()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(Pattern::set(BTreeMap::new(), Tail::Hole), Pattern::Hole);
        assert_eq!(Pattern::set(BTreeMap::new(), Tail::Diamond), Pattern::Diamond);
        assert_ne!(Pattern::record([], Tail::Hole), Pattern::Hole);
    }

    #[test]
    fn lub_of_partial_records() {
        let a = Pattern::record([("A", Pattern::int(1))], Tail::Hole);
        let b = Pattern::record([("B", Pattern::int(2))], Tail::Diamond);
        assert_eq!(
            lub(&a, &b).unwrap(),
            Pattern::record([("A", Pattern::int(1)), ("B", Pattern::int(2))], Tail::Diamond)
        );
        let c = Pattern::record([("A", Pattern::Hole)], Tail::Hole);
        let d = Pattern::record([("B", Pattern::Hole)], Tail::Diamond);
        assert_eq!(
            lub(&c, &d).unwrap(),
            Pattern::record([("A", Pattern::Diamond), ("B", Pattern::Hole)], Tail::Diamond)
        );
    }

    #[test]
    fn lub_rejects_conflicts() {
        assert_eq!(lub(&Pattern::int(1), &Pattern::int(2)), Err(Error::Incompatible));
        let closed = set(vec![("a", Pattern::Hole)], Tail::Closed);
        let other = set(vec![("b", Pattern::Hole)], Tail::Hole);
        assert!(lub(&closed, &other).is_err());
        let deep = set(vec![("a,b", Pattern::Hole)], Tail::Hole);
        let shallow = set(vec![("a", Pattern::Hole)], Tail::Hole);
        assert!(lub(&deep, &shallow).is_err());
        let partial = set(vec![("a", Pattern::int(1))], Tail::Hole);
        assert!(lub(&Pattern::empty_set(), &partial).is_err());
    }

    #[test]
    fn diamond_joins() {
        let p = set(vec![("a", Pattern::Hole)], Tail::Hole);
        assert_eq!(
            lub(&Pattern::Diamond, &p).unwrap(),
            set(vec![("a", Pattern::Diamond)], Tail::Diamond)
        );
        assert_eq!(lub(&Pattern::Diamond, &Pattern::int(3)).unwrap(), Pattern::int(3));
    }

    #[test]
    fn union_and_projection() {
        let p = pattern_union(
            &set(vec![("1,r2", Pattern::int(3))], Tail::Closed),
            &Pattern::Hole,
        )
        .unwrap();
        assert_eq!(p, set(vec![("1,r2", Pattern::int(3))], Tail::Hole));
        assert_eq!(
            label_project(&p, &l("1")).unwrap(),
            set(vec![("r2", Pattern::int(3))], Tail::Hole)
        );
        assert_eq!(label_project(&p, &l("2")).unwrap(), Pattern::Hole);
        assert_eq!(prepend_pattern(&l("1"), &Pattern::Hole).unwrap(), Pattern::Hole);
        assert_eq!(
            singleton_extract(&set(vec![("", Pattern::int(7))], Tail::Closed)).unwrap(),
            Pattern::int(7)
        );
        assert_eq!(
            pattern_union(&p, &set(vec![("1,r2,x", Pattern::Hole)], Tail::Closed)),
            Err(Error::DomainOverlap)
        );
    }

    #[test]
    fn field_projection() {
        let r = Pattern::record([("A", Pattern::int(1))], Tail::Hole);
        assert_eq!(field_project(&r, "A").unwrap(), Pattern::int(1));
        assert_eq!(field_project(&r, "B").unwrap(), Pattern::Hole);
        let d = Pattern::record([], Tail::Diamond);
        assert_eq!(field_project(&d, "B").unwrap(), Pattern::Diamond);
    }

    #[test]
    fn equivalence() {
        let v = Value::record([("A", Value::int(1)), ("B", Value::int(2))]);
        let w = Value::record([("A", Value::int(1)), ("B", Value::int(5))]);
        let pa = Pattern::record([("A", Pattern::Diamond)], Tail::Hole);
        assert!(equiv_at(&pa, &v, &w));
        let pd = Pattern::record([("A", Pattern::Diamond)], Tail::Diamond);
        assert!(!equiv_at(&pd, &v, &w));
        assert!(equiv_at(&Pattern::Hole, &v, &Value::int(0)));
        assert!(!equiv_at(&Pattern::int(1), &Value::int(1), &Value::int(2)));
    }

    #[test]
    fn resolve_diamonds() {
        let v = Value::record([("A", Value::int(1)), ("B", Value::int(2))]);
        let p = Pattern::record([("A", Pattern::Diamond)], Tail::Hole);
        assert_eq!(resolve(&p, &v), Pattern::record([("A", Pattern::int(1))], Tail::Hole));
        let q = Pattern::record([], Tail::Diamond);
        assert_eq!(resolve(&q, &v), Pattern::from_value(&v));
    }

    #[test]
    fn display() {
        let p = set(
            vec![("r2", Pattern::record([("B", Pattern::int(3))], Tail::Hole))],
            Tail::Hole,
        );
        assert_eq!(p.to_string(), "{[r2].<B: 3; _>} U _");
    }
}

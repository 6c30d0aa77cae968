use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// One component of a label. Naturals sort before names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Nat(u64),
    Name(Arc<str>),
}

impl Atom {
    /// Builds a name atom: an identifier made of ASCII alphanumerics and
    /// underscores, starting with a letter or underscore, other than `_`.
    pub fn name(s: &str) -> Result<Atom, Error> {
        if !is_valid_name(s) {
            return Err(Error::InvalidAtom(s.to_string()));
        }
        Ok(Atom::Name(Arc::from(s)))
    }

    /// Reads an atom the way the text and JSON formats do.
    pub fn parse(s: &str) -> Result<Atom, Error> {
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            s.parse::<u64>()
                .map(Atom::Nat)
                .map_err(|_| Error::InvalidAtom(s.to_string()))
        } else {
            Atom::name(s)
        }
    }
}

pub(crate) fn is_valid_name(s: &str) -> bool {
    let first = s.bytes().next();
    matches!(first, Some(b) if b.is_ascii_alphabetic() || b == b'_')
        && s != "_"
        && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Nat(n) => write!(f, "{n}"),
            Atom::Name(s) => f.write_str(s),
        }
    }
}

impl From<u64> for Atom {
    fn from(n: u64) -> Atom {
        Atom::Nat(n)
    }
}

/// A finite sequence of atoms, ordered lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Vec<Atom>);

impl Label {
    pub fn empty() -> Label {
        Label(Vec::new())
    }

    pub fn new(atoms: Vec<Atom>) -> Label {
        Label(atoms)
    }

    pub fn nat(n: u64) -> Label {
        Label(vec![Atom::Nat(n)])
    }

    /// Parses a comma-separated atom list such as `1,r2`.
    pub fn parse(s: &str) -> Result<Label, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Label::empty());
        }
        s.split(',')
            .map(|a| Atom::parse(a.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map(Label)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Label) -> Label {
        let mut atoms = Vec::with_capacity(self.0.len() + other.0.len());
        atoms.extend_from_slice(&self.0);
        atoms.extend_from_slice(&other.0);
        Label(atoms)
    }

    pub fn is_prefix_of(&self, other: &Label) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `other` with `self` removed from its front, if `self` is a prefix.
    pub fn strip_from(&self, other: &Label) -> Option<Label> {
        other
            .0
            .strip_prefix(self.0.as_slice())
            .map(|rest| Label(rest.to_vec()))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl From<Vec<Atom>> for Label {
    fn from(atoms: Vec<Atom>) -> Label {
        Label(atoms)
    }
}

/// True when no label of the sorted sequence is a prefix of another.
/// In lexicographic order a prefix clash always shows up between neighbours.
pub fn is_prefix_code<'a>(labels: impl IntoIterator<Item = &'a Label>) -> bool {
    let mut prev: Option<&Label> = None;
    for l in labels {
        if let Some(p) = prev {
            if p.is_prefix_of(l) {
                return false;
            }
        }
        prev = Some(l);
    }
    true
}

/// True when `label` is a prefix of some key of `map` or has one as a prefix.
pub fn clashes<V>(map: &BTreeMap<Label, V>, label: &Label) -> bool {
    for n in 0..=label.len() {
        if map.contains_key(&Label(label.0[..n].to_vec())) {
            return true;
        }
    }
    match map.range(label.clone()..).next() {
        Some((k, _)) => label.is_prefix_of(k),
        None => false,
    }
}

/// Finds the key of `map` that is a prefix of `label`, if any.
pub fn prefix_key<'a, V>(map: &'a BTreeMap<Label, V>, label: &Label) -> Option<&'a Label> {
    for n in (0..=label.len()).rev() {
        if let Some((k, _)) = map.get_key_value(&Label(label.0[..n].to_vec())) {
            return Some(k);
        }
    }
    None
}

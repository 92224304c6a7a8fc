use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of variable names shared by every polynomial in a ring.
///
/// Cloning is cheap; equality is by content.
#[derive(Clone)]
pub struct VarList(Arc<[String]>);

impl VarList {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::usage(format!("`{name}` is not a valid variable name")));
            }
            if names[..i].contains(name) {
                return Err(Error::usage(format!("variable `{name}` declared twice")));
            }
        }
        Ok(VarList(names.into()))
    }

    pub fn empty() -> Self {
        VarList(Arc::from(Vec::<String>::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::usage(format!("unknown variable `{name}`")))
    }

    /// This list followed by `extra` (which must not overlap).
    pub fn extended<S: AsRef<str>>(&self, extra: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut names = self.0.to_vec();
        names.extend(extra.into_iter().map(|s| s.as_ref().to_owned()));
        VarList::new(names)
    }
}

impl PartialEq for VarList {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarList {}

impl PartialOrd for VarList {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarList {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for VarList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Exponent vector indexed by a [`VarList`].
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the first variable, then the second, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    /// All monomials in `nvars` variables of total degree `<= max_degree`,
    /// ascending in graded-lex order.
    pub fn up_to_degree(nvars: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut level = Vec::new();
            let mut current = vec![0; nvars];
            fill(&mut current, 0, d, &mut level);
            level.sort();
            out.extend(level);
        }
        out
    }

    /// Renders the monomial over `vars` as `x^2*y`; empty string for 1.
    pub fn render(&self, vars: &VarList) -> String {
        let mut parts = Vec::new();
        for (name, &e) in vars.names().iter().zip(&self.0) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

fn fill(current: &mut Vec<u32>, index: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if index + 1 == current.len() {
        current[index] = remaining;
        out.push(Monomial(current.clone()));
        current[index] = 0;
        return;
    }
    if current.is_empty() {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    for e in 0..=remaining {
        current[index] = e;
        fill(current, index + 1, remaining - e, out);
    }
    current[index] = 0;
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x2 = Monomial::new(vec![2, 0]);
        let xy = Monomial::new(vec![1, 1]);
        let y2 = Monomial::new(vec![0, 2]);
        let x = Monomial::new(vec![1, 0]);
        assert!(x2 > xy && xy > y2 && y2 > x);
    }

    #[test]
    fn enumerates_monomials() {
        let ms = Monomial::up_to_degree(2, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Monomial::up_to_degree(3, 10).len(), 286);
        assert_eq!(Monomial::up_to_degree(0, 3), vec![Monomial::new(vec![])]);
    }

    #[test]
    fn var_list_rejects_duplicates() {
        assert!(VarList::new(["x", "y", "x"]).is_err());
        assert!(VarList::new(["2x"]).is_err());
        let v = VarList::new(["z1", "z2"]).unwrap();
        assert_eq!(v.extended(["a0"]).unwrap().names(), ["z1", "z2", "a0"]);
        assert!(v.extended(["z1"]).is_err());
    }
}

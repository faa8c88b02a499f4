//! Finite sums over the two-element field, plus the shared text grammar.
//!
//! A term is a comma-separated list of nonnegative integers ("3,3,2"); a sum
//! is terms joined by '+'. The empty string is the zero sum.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A set of terms; adding a term already present cancels it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Sum<T: Ord> {
    terms: BTreeSet<T>,
}

impl<T: Ord> Default for F2Sum<T> {
    fn default() -> Self {
        F2Sum { terms: BTreeSet::new() }
    }
}

impl<T: Ord + Clone> F2Sum<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(t: T) -> Self {
        let mut s = Self::zero();
        s.toggle(t);
        s
    }

    pub fn toggle(&mut self, t: T) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add_assign(&mut self, other: &F2Sum<T>) {
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    pub fn add(&self, other: &F2Sum<T>) -> F2Sum<T> {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn contains(&self, t: &T) -> bool {
        self.terms.contains(t)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.terms.iter()
    }
}

impl<T: Ord + Clone> FromIterator<T> for F2Sum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::zero();
        for t in iter {
            s.toggle(t);
        }
        s
    }
}

impl<T: Ord> IntoIterator for F2Sum<T> {
    type Item = T;
    type IntoIter = std::collections::btree_set::IntoIter<T>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, T: Ord> IntoIterator for &'a F2Sum<T> {
    type Item = &'a T;
    type IntoIter = std::collections::btree_set::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// Terms that are tuples of nonnegative integers.
pub trait Tuple: Sized {
    fn entries(&self) -> &[u32];
    fn from_entries(v: Vec<u32>) -> Self;
}

pub fn format_tuple(t: &[u32]) -> String {
    t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

impl<T: Ord + Clone + Tuple> F2Sum<T> {
    pub fn to_text(&self) -> String {
        self.terms.iter().map(|t| format_tuple(t.entries())).collect::<Vec<_>>().join(" + ")
    }

    /// Parses the sum grammar. With `arity`, every term must have that many entries.
    pub fn parse(s: &str, arity: Option<usize>) -> Result<Self> {
        let mut out = Self::zero();
        if s.trim().is_empty() {
            return Ok(out);
        }
        let mut offset = 0;
        for chunk in s.split('+') {
            let term = parse_tuple(chunk, offset)?;
            if let Some(k) = arity {
                if term.len() != k {
                    return Err(Error::Parse {
                        pos: offset + chunk.len() - chunk.trim_start().len(),
                        msg: format!("term has {} entries, expected {k}", term.len()),
                    });
                }
            }
            out.toggle(T::from_entries(term));
            offset += chunk.len() + 1;
        }
        Ok(out)
    }
}

fn parse_tuple(chunk: &str, offset: usize) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    let mut pos = offset;
    for field in chunk.split(',') {
        let lead = field.len() - field.trim_start().len();
        let f = field.trim();
        if f.is_empty() {
            return Err(Error::Parse { pos: pos + lead, msg: "empty entry".into() });
        }
        match f.parse::<u32>() {
            Ok(v) => out.push(v),
            Err(_) => {
                return Err(Error::Parse {
                    pos: pos + lead,
                    msg: format!("expected a nonnegative integer, found {f:?}"),
                })
            }
        }
        pos += field.len() + 1;
    }
    Ok(out)
}

impl<T: Ord + Clone + Tuple> fmt::Display for F2Sum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else {
            f.write_str(&self.to_text())
        }
    }
}

impl<T: Ord + Clone + Tuple> fmt::Debug for F2Sum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_text())
    }
}

/// Compositions of `total` into `parts` entries, each at least `min`, in lex order.
pub fn compositions(total: u32, parts: usize, min: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(rem: u32, left: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let reserve = min * (left as u32 - 1);
        if rem < reserve + min {
            return;
        }
        let hi = if left == 1 { rem } else { rem - reserve };
        let lo = if left == 1 { rem } else { min };
        for v in lo..=hi {
            cur.push(v);
            rec(rem - v, left - 1, min, cur, out);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, min, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(8, 3, 0).len(), 45);
        assert_eq!(compositions(9, 2, 1).len(), 8);
        assert_eq!(compositions(3, 3, 1), vec![vec![1, 1, 1]]);
        assert_eq!(compositions(0, 0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(2, 3, 1).is_empty());
        let c = compositions(5, 3, 0);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }
}

//! The lambda algebra: words in generators λ_i, Adem normal form and the differential.
//!
//! Admissible words satisfy `i_j ≤ 2·i_{j+1}`. An inadmissible pair
//! `λ_s λ_t` (`s > 2t`) rewrites to `Σ_j C(j-t-1, 2j-s) λ_{s+t-j} λ_j`.

use std::collections::HashMap;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::gf2::binom_mod2;
use crate::sum::{compositions, F2Sum, Tuple};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Tuple for Word {
    fn entries(&self) -> &[u32] {
        &self.0
    }
    fn from_entries(v: Vec<u32>) -> Self {
        Word(v)
    }
}

pub type LambdaPoly = F2Sum<Word>;

pub fn is_admissible(w: &Word) -> bool {
    first_inadmissible(w).is_none()
}

fn first_inadmissible(w: &Word) -> Option<usize> {
    w.0.windows(2).position(|p| p[0] > 2 * p[1])
}

/// The Adem expansion of the pair starting at `pos`; the pair must be inadmissible.
pub fn rewrite_at(w: &Word, pos: usize) -> LambdaPoly {
    let (s, t) = (w.0[pos], w.0[pos + 1]);
    assert!(s > 2 * t, "pair at {pos} is admissible");
    let mut out = LambdaPoly::zero();
    for j in 0..=s + t {
        if binom_mod2(j as i64 - t as i64 - 1, 2 * j as i64 - s as i64) {
            let mut v = w.0.clone();
            v[pos] = s + t - j;
            v[pos + 1] = j;
            out.toggle(Word(v));
        }
    }
    out
}

const REWRITE_BUDGET: u64 = 50_000_000;

/// Adem reduction with a per-word memo. Keep one around when reducing many
/// polynomials; the memo never changes results.
#[derive(Default)]
pub struct Reducer {
    memo: HashMap<Word, LambdaPoly>,
    steps: u64,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reduce(&mut self, p: &LambdaPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for w in p {
            let r = self.reduce_word(w);
            out.add_assign(&r);
        }
        out
    }

    /// Leftmost inadmissible pair first. Each rewrite lowers the first letter
    /// of the rewritten pair, so the recursion terminates.
    pub fn reduce_word(&mut self, w: &Word) -> LambdaPoly {
        if let Some(r) = self.memo.get(w) {
            return r.clone();
        }
        let out = match first_inadmissible(w) {
            None => LambdaPoly::single(w.clone()),
            Some(pos) => {
                self.steps += 1;
                assert!(self.steps < REWRITE_BUDGET, "Adem rewrite budget exhausted at {w:?}");
                let mut acc = LambdaPoly::zero();
                for v in rewrite_at(w, pos) {
                    let r = self.reduce_word(&v);
                    acc.add_assign(&r);
                }
                acc
            }
        };
        self.memo.insert(w.clone(), out.clone());
        out
    }
}

pub fn adem_reduce(p: &LambdaPoly) -> LambdaPoly {
    Reducer::new().reduce(p)
}

/// Order of the two letters in `δ(λ_n)`.
///
/// `Mirrored` (`λ_t λ_{n-1-t}`) is the form compatible with the admissibility
/// convention above and squares to zero. `Literal` (`λ_{n-1-t} λ_t`) is the
/// formula as printed alongside it; it does not square to zero here and is
/// kept to reproduce printed computations that used it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Mirrored,
    Literal,
}

/// `δ(λ_n) = Σ_t C(n-1-t, t+1)` times the pair `(n-1-t, t)` in the convention's order.
pub fn differential_generator(n: u32, conv: Convention) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for t in 0..n {
        let a = n - 1 - t;
        if binom_mod2(a as i64, t as i64 + 1) {
            out.toggle(Word(match conv {
                Convention::Literal => vec![a, t],
                Convention::Mirrored => vec![t, a],
            }));
        }
    }
    out
}

/// Leibniz extension; the output is not reduced.
pub fn differential(p: &LambdaPoly, conv: Convention) -> LambdaPoly {
    let mut gens: HashMap<u32, LambdaPoly> = HashMap::new();
    let mut out = LambdaPoly::zero();
    for w in p {
        for (i, &n) in w.0.iter().enumerate() {
            let d = gens.entry(n).or_insert_with(|| differential_generator(n, conv));
            for pair in d.iter() {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.extend_from_slice(&w.0[..i]);
                v.extend_from_slice(&pair.0);
                v.extend_from_slice(&w.0[i + 1..]);
                out.toggle(Word(v));
            }
        }
    }
    out
}

pub fn is_cocycle(p: &LambdaPoly, conv: Convention) -> bool {
    adem_reduce(&differential(p, conv)).is_zero()
}

pub fn positive_compositions(total: u32, parts: usize) -> Vec<Word> {
    compositions(total, parts, 1).into_iter().map(Word).collect()
}

/// Admissible words of the given length and index sum, lex ascending.
pub fn admissible_words(len: usize, total: u32) -> Vec<Word> {
    compositions(total, len, 0).into_iter().map(Word).filter(is_admissible).collect()
}

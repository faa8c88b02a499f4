//! The chain-level transfer φ_k from divided powers to length-k lambda words.
//!
//! `ChonHa`: φ_k(t_1..t_k) = Σ_i λ_i · φ_{k-1}((t_2..t_k) Sq_*^{i-t_1}), λ_i prepended.
//! `Sum`: φ_k(t_1..t_k) = Σ_i φ_{k-1}((t_1..t_{k-1}) Sq_*^{i-t_k}) · λ_i, λ_i appended.
//! In both the index runs from the stripped exponent up to that plus
//! Σ ⌊t_m/2⌋ over the rest, since C(t-j, j) vanishes once 2j > t.

use std::collections::HashMap;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::divided::{sq_star, DividedMonomial, DividedPoly};
use crate::lambda::{LambdaPoly, Word};
use crate::poly::Monomial;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    ChonHa,
    Sum,
}

/// Memoized transfer for one variant. Output words are not Adem-reduced.
#[derive(Default)]
pub struct Transfer {
    variant: Variant,
    memo: HashMap<Vec<u32>, LambdaPoly>,
}

impl Transfer {
    pub fn new(variant: Variant) -> Self {
        Transfer { variant, memo: HashMap::new() }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn monomial(&mut self, m: &DividedMonomial) -> LambdaPoly {
        if let Some(r) = self.memo.get(&m.0) {
            return r.clone();
        }
        let out = match m.0.len() {
            0 => LambdaPoly::single(Word(vec![])),
            1 => LambdaPoly::single(Word(vec![m.0[0]])),
            k => {
                let (head, rest) = match self.variant {
                    Variant::ChonHa => (m.0[0], Monomial(m.0[1..].to_vec())),
                    Variant::Sum => (m.0[k - 1], Monomial(m.0[..k - 1].to_vec())),
                };
                let top = head + rest.0.iter().map(|t| t / 2).sum::<u32>();
                let mut acc = LambdaPoly::zero();
                for i in head..=top {
                    for mm in sq_star(&rest, i - head) {
                        for w in self.monomial(&mm) {
                            let mut v = Vec::with_capacity(k);
                            match self.variant {
                                Variant::ChonHa => {
                                    v.push(i);
                                    v.extend_from_slice(&w.0);
                                }
                                Variant::Sum => {
                                    v.extend_from_slice(&w.0);
                                    v.push(i);
                                }
                            }
                            acc.toggle(Word(v));
                        }
                    }
                }
                acc
            }
        };
        self.memo.insert(m.0.clone(), out.clone());
        out
    }

    pub fn poly(&mut self, x: &DividedPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for m in x {
            let r = self.monomial(m);
            out.add_assign(&r);
        }
        out
    }
}

pub fn transfer(m: &DividedMonomial) -> LambdaPoly {
    Transfer::new(Variant::ChonHa).monomial(m)
}

pub fn transfer_sum_variant(m: &DividedMonomial) -> LambdaPoly {
    Transfer::new(Variant::Sum).monomial(m)
}

pub fn transfer_poly(x: &DividedPoly, variant: Variant) -> LambdaPoly {
    Transfer::new(variant).poly(x)
}

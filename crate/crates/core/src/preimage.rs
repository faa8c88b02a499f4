//! Preimages under the transfer: solve φ_k(x) + δ(z) = y with x annihilated
//! by every dual square.
//!
//! The unknowns are the coefficients of x over the compositions of deg_x into
//! k parts and of z over the positive compositions of deg_x + 1 into k - 1
//! parts. For each z candidate, taken by increasing support size, the
//! φ-subsystem gives a particular solution x_p (free variables 0) and a kernel
//! basis K_0, K_1, ...; candidate `i` is x_p plus the K_j for the set bits of i.

use std::collections::HashMap;

use clap::ValueEnum;
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divided::{is_a_annihilated, DividedPoly};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, ColumnBasis};
use crate::hit::HitBasis;
use crate::lambda::{admissible_words, differential, Convention, LambdaPoly, Reducer, Word};
use crate::poly::Monomial;
use crate::sum::compositions;
use crate::transfer::{Transfer, Variant};

pub const DEFAULT_KERNEL_CAP: u64 = 1 << 20;
pub const PROGRESS_EVERY: u64 = 10_000;

/// How the kernel combinations are searched.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Finds the first annihilated candidate in enumeration order by solving
    /// for it directly; reports truncation when it lies beyond the cap.
    #[default]
    Ordered,
    /// Walks the candidates one by one up to the cap.
    Scan,
    /// Solves over a basis of the annihilated elements; no cap applies.
    Affine,
}

#[derive(Clone, Debug)]
pub struct PreimageProblem {
    pub k: usize,
    pub y: LambdaPoly,
    pub deg_x: u32,
    pub deg_z: u32,
    pub variant: Variant,
    pub convention: Convention,
    pub max_z_terms: usize,
    pub kernel_cap: u64,
    pub strategy: Strategy,
    /// Keep searching after the first solution; report the first one per z.
    pub all: bool,
    /// Allow λ_0 in the z basis.
    pub widen_z: bool,
    /// Refuse targets that are not cocycles.
    pub require_cocycle: bool,
}

impl PreimageProblem {
    pub fn new(k: usize, y: LambdaPoly) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument("preimage search needs k >= 2".into()));
        }
        let Some(first) = y.iter().next() else {
            return Err(Error::InvalidArgument("target is zero".into()));
        };
        let deg_x = first.degree();
        if let Some(w) = y.iter().find(|w| w.len() != k || w.degree() != deg_x) {
            return Err(Error::InvalidArgument(format!(
                "target is not homogeneous: word {} differs from length {k}, index sum {deg_x}",
                crate::sum::format_tuple(&w.0)
            )));
        }
        Ok(PreimageProblem {
            k,
            y,
            deg_x,
            deg_z: deg_x + 1,
            variant: Variant::default(),
            convention: Convention::default(),
            max_z_terms: 2,
            kernel_cap: DEFAULT_KERNEL_CAP,
            strategy: Strategy::default(),
            all: false,
            widen_z: false,
            require_cocycle: true,
        })
    }

    /// x basis: compositions of deg_x into k parts, lex descending.
    pub fn x_basis(&self) -> Vec<Monomial> {
        compositions(self.deg_x, self.k, 0).into_iter().rev().map(Monomial).collect()
    }

    /// z basis: compositions of deg_z into k - 1 parts, lex descending.
    pub fn z_basis(&self) -> Vec<Word> {
        let min = if self.widen_z { 0 } else { 1 };
        compositions(self.deg_z, self.k - 1, min).into_iter().rev().map(Word).collect()
    }
}

pub struct LinearSystem {
    /// Admissible words of length k and index sum deg_x.
    pub rows: Vec<Word>,
    pub x_columns: Vec<Monomial>,
    pub z_columns: Vec<Word>,
    /// Reduced φ_k of each x column, then reduced δ of each z column.
    pub columns: Vec<BitVec>,
    pub target: BitVec,
}

impl LinearSystem {
    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::from_columns(self.rows.len(), &self.columns)
    }

    fn phi_columns(&self) -> &[BitVec] {
        &self.columns[..self.x_columns.len()]
    }

    fn delta_columns(&self) -> &[BitVec] {
        &self.columns[self.x_columns.len()..]
    }
}

fn to_vector(p: &LambdaPoly, row_index: &HashMap<Word, usize>, n: usize) -> Result<BitVec> {
    let mut v = BitVec::zeros(n);
    for w in p {
        let i = row_index
            .get(w)
            .ok_or_else(|| Error::Internal(format!("word {} outside the row basis", crate::sum::format_tuple(&w.0))))?;
        v.flip(*i);
    }
    Ok(v)
}

fn check_cocycle(p: &PreimageProblem) -> Result<()> {
    let d = Reducer::new().reduce(&differential(&p.y, p.convention));
    if p.require_cocycle && !d.is_zero() {
        return Err(Error::NotCocycle { delta: d.to_text() });
    }
    Ok(())
}

pub fn assemble_system(p: &PreimageProblem) -> Result<LinearSystem> {
    check_cocycle(p)?;
    let rows = admissible_words(p.k, p.deg_x);
    let row_index: HashMap<Word, usize> = rows.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let n = rows.len();
    let x_columns = p.x_basis();
    let z_columns = p.z_basis();
    let phi: Vec<LambdaPoly> = x_columns
        .par_iter()
        .map_init(
            || (Transfer::new(p.variant), Reducer::new()),
            |(t, r), m| {
                let raw = t.monomial(m);
                r.reduce(&raw)
            },
        )
        .collect();
    let mut reducer = Reducer::new();
    let mut columns = Vec::with_capacity(x_columns.len() + z_columns.len());
    for f in &phi {
        columns.push(to_vector(f, &row_index, n)?);
    }
    for w in &z_columns {
        let d = reducer.reduce(&differential(&LambdaPoly::single(w.clone()), p.convention));
        columns.push(to_vector(&d, &row_index, n)?);
    }
    let target = to_vector(&reducer.reduce(&p.y), &row_index, n)?;
    Ok(LinearSystem { rows, x_columns, z_columns, columns, target })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageSolution {
    pub x: DividedPoly,
    pub z: LambdaPoly,
    /// Reduced φ_k(x) + δ(z), recomputed from scratch.
    pub certificate: LambdaPoly,
    pub candidates_checked: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Found,
    /// Every candidate within the z range was examined.
    NoSolution,
    /// No solution found, but some kernel enumeration stopped at the cap.
    Truncated,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: Outcome,
    pub solutions: Vec<PreimageSolution>,
    pub candidates_checked: u64,
    pub z_candidates: u64,
    pub phi_rank: usize,
    pub kernel_dim: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub x: String,
    pub z: String,
    pub y_admissible: String,
    pub variant: Variant,
    pub candidates_checked: u64,
}

impl PreimageSolution {
    pub fn to_certificate(&self, variant: Variant) -> Certificate {
        Certificate {
            x: self.x.to_text(),
            z: self.z.to_text(),
            y_admissible: self.certificate.to_text(),
            variant,
            candidates_checked: self.candidates_checked,
        }
    }
}

/// Search progress messages.
pub enum Event<'a> {
    ZSize { n: usize, combinations: u64 },
    Progress { checked: u64 },
    Found { checked: u64, z: &'a LambdaPoly },
}

pub fn find_preimages(p: &PreimageProblem) -> Result<SearchReport> {
    find_preimages_with(p, &mut |_| {})
}

pub fn find_preimages_with(p: &PreimageProblem, log: &mut dyn FnMut(Event)) -> Result<SearchReport> {
    let sys = assemble_system(p)?;
    let nx = sys.x_columns.len();
    let nrows = sys.rows.len();

    let mut phi_basis = ColumnBasis::new(nrows, nx);
    let mut kernel = Vec::new();
    for c in sys.phi_columns() {
        if let Some(kv) = phi_basis.insert(c) {
            kernel.push(kv);
        }
    }
    let hit = HitBasis::compute(p.k, p.deg_x);
    let h_cols: Vec<BitVec> = sys
        .x_columns
        .iter()
        .map(|m| hit.annihilator_image(&DividedPoly::single(m.clone())))
        .collect::<Result<_>>()?;
    let h_of = |v: &BitVec| {
        let mut out = BitVec::zeros(hit.ordered.len());
        for j in v.ones() {
            out.xor_assign(&h_cols[j]);
        }
        out
    };
    let hk: Vec<BitVec> = kernel.iter().map(h_of).collect();
    let mut hk_basis = ColumnBasis::new(hit.ordered.len(), hk.len());
    for v in &hk {
        hk_basis.insert(v);
    }
    // Annihilated elements as vectors over the x basis, for the affine strategy.
    let (prim_basis, prims) = if p.strategy == Strategy::Affine {
        let x_index: HashMap<&Monomial, usize> = sys.x_columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let prims: Vec<BitVec> =
            (0..hit.dim()).map(|a| BitVec::from_ones(nx, hit.primitive(a).iter().map(|m| x_index[m]))).collect();
        let mut cb = ColumnBasis::new(nrows, prims.len());
        for v in &prims {
            let mut img = BitVec::zeros(nrows);
            for j in v.ones() {
                img.xor_assign(&sys.phi_columns()[j]);
            }
            cb.insert(&img);
        }
        (Some(cb), prims)
    } else {
        (None, Vec::new())
    };

    let to_x = |v: &BitVec| -> DividedPoly { v.ones().map(|j| sys.x_columns[j].clone()).collect() };
    let z_of = |combo: &[usize]| -> LambdaPoly { combo.iter().map(|&j| sys.z_columns[j].clone()).collect() };

    let mut report = SearchReport {
        outcome: Outcome::NoSolution,
        solutions: Vec::new(),
        candidates_checked: 0,
        z_candidates: 0,
        phi_rank: phi_basis.rank(),
        kernel_dim: kernel.len(),
    };
    let mut truncated = false;
    let space = if kernel.len() >= 64 { u64::MAX } else { 1u64 << kernel.len() };
    let per_z_limit = space.min(p.kernel_cap);
    let mut next_progress = PROGRESS_EVERY;
    let mut reducer = Reducer::new();
    let mut transfer = Transfer::new(p.variant);

    for n in 0..=p.max_z_terms.min(sys.z_columns.len()) {
        let combos: Vec<Vec<usize>> = (0..sys.z_columns.len()).combinations(n).collect();
        log(Event::ZSize { n, combinations: combos.len() as u64 });
        for combo in combos {
            report.z_candidates += 1;
            let mut b = sys.target.clone();
            for &j in &combo {
                b.xor_assign(&sys.delta_columns()[j]);
            }
            let found: Option<(BitVec, u64)> = match p.strategy {
                Strategy::Affine => {
                    report.candidates_checked += 1;
                    prim_basis.as_ref().expect("affine basis").express(&b).map(|alpha| {
                        let mut x = BitVec::zeros(nx);
                        for a in alpha.ones() {
                            x.xor_assign(&prims[a]);
                        }
                        (x, report.candidates_checked)
                    })
                }
                Strategy::Ordered => {
                    let Some(xp) = phi_basis.express(&b) else { continue };
                    match hk_basis.express(&h_of(&xp)) {
                        Some(c) if c.as_u64().is_some_and(|v| v < per_z_limit) => {
                            let idx = c.as_u64().expect("checked");
                            let mut x = xp;
                            for j in c.ones() {
                                x.xor_assign(&kernel[j]);
                            }
                            advance(&mut report.candidates_checked, &mut next_progress, idx + 1, log);
                            Some((x, report.candidates_checked))
                        }
                        _ => {
                            truncated |= space > p.kernel_cap;
                            advance(&mut report.candidates_checked, &mut next_progress, per_z_limit, log);
                            None
                        }
                    }
                }
                Strategy::Scan => {
                    let Some(xp) = phi_basis.express(&b) else { continue };
                    let mut acc = h_of(&xp);
                    let mut hitv = None;
                    let mut i = 0u64;
                    loop {
                        report.candidates_checked += 1;
                        if report.candidates_checked.is_multiple_of(PROGRESS_EVERY) {
                            log(Event::Progress { checked: report.candidates_checked });
                        }
                        if acc.is_zero() {
                            hitv = Some(i);
                            break;
                        }
                        if i + 1 >= per_z_limit {
                            truncated |= space > p.kernel_cap;
                            break;
                        }
                        // Bits that change from i to i + 1.
                        let flips = (i ^ (i + 1)).count_ones() as usize;
                        for v in &hk[..flips] {
                            acc.xor_assign(v);
                        }
                        i += 1;
                    }
                    hitv.map(|i| {
                        let mut x = xp;
                        for (j, v) in kernel.iter().take(64).enumerate() {
                            if i >> j & 1 == 1 {
                                x.xor_assign(v);
                            }
                        }
                        (x, report.candidates_checked)
                    })
                }
            };
            let Some((xv, checked)) = found else { continue };
            let x = to_x(&xv);
            let z = z_of(&combo);
            // Independent re-check with the dual squares and a fresh transfer.
            if !is_a_annihilated(&x) {
                return Err(Error::Internal("selected candidate is not annihilated".into()));
            }
            let mut cert = transfer.poly(&x);
            cert.add_assign(&differential(&z, p.convention));
            let cert = reducer.reduce(&cert);
            if cert != reducer.reduce(&p.y) {
                return Err(Error::Internal("selected candidate fails verification".into()));
            }
            log(Event::Found { checked, z: &z });
            report.solutions.push(PreimageSolution { x, z, certificate: cert, candidates_checked: checked });
            if !p.all {
                report.outcome = Outcome::Found;
                return Ok(report);
            }
        }
    }
    report.outcome = if !report.solutions.is_empty() {
        Outcome::Found
    } else if truncated {
        Outcome::Truncated
    } else {
        Outcome::NoSolution
    };
    Ok(report)
}

/// Adds `by` to the running count, emitting the progress marks passed on the way.
fn advance(checked: &mut u64, next: &mut u64, by: u64, log: &mut dyn FnMut(Event)) {
    let end = checked.saturating_add(by);
    while *next <= end {
        log(Event::Progress { checked: *next });
        *next = next.saturating_add(PROGRESS_EVERY);
    }
    *checked = end;
}

/// True iff reduced φ_k(x) + δ(z) equals reduced y and x is annihilated.
pub fn verify_solution(
    k: usize,
    x: &DividedPoly,
    z: &LambdaPoly,
    y: &LambdaPoly,
    variant: Variant,
    convention: Convention,
) -> bool {
    if x.iter().any(|m| m.k() != k) || z.iter().any(|w| w.len() + 1 != k) {
        return false;
    }
    let mut r = Reducer::new();
    let mut lhs = Transfer::new(variant).poly(x);
    lhs.add_assign(&differential(z, convention));
    r.reduce(&lhs) == r.reduce(y) && is_a_annihilated(x)
}

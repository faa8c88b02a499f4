//! Admissible monomial basis of the cohit space (Q P_k)_d and the reducer
//! expressing every degree-d monomial in that basis modulo hit elements.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::divided::DividedPoly;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::poly::{compare_monomials, monomials_of_degree, sq_monomial, Monomial, Poly2};

/// Degree-d monomials in `compare_monomials` order.
pub fn ordered_monomials(k: usize, d: u32) -> Vec<Monomial> {
    let mut v = monomials_of_degree(k, d);
    v.sort_by(compare_monomials);
    v
}

fn index_of(ordered: &[Monomial]) -> HashMap<Monomial, usize> {
    ordered.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// Nonzero `Sq^(2^i)(g)` over `2^i ≤ d` and `g` of degree `d - 2^i`, ordered by
/// `(i, g)` with `g` in monomial order. Vectors are indexed by `ordered`.
pub fn hit_vectors(k: usize, d: u32, ordered: &[Monomial], index: &HashMap<Monomial, usize>) -> Vec<BitVec> {
    let n = ordered.len();
    let mut out = Vec::new();
    let mut p = 1u32;
    while p <= d {
        let gs = ordered_monomials(k, d - p);
        let cols: Vec<BitVec> = gs
            .par_iter()
            .map(|g| BitVec::from_ones(n, sq_monomial(p, g).iter().map(|m| index[m])))
            .filter(|v| !v.is_zero())
            .collect();
        out.extend(cols);
        p <<= 1;
    }
    out
}

/// Rows are the ordered degree-d monomials, one column per nonzero hit vector.
pub fn build_hit_matrix(k: usize, d: u32) -> BitMatrix {
    let ordered = ordered_monomials(k, d);
    let index = index_of(&ordered);
    BitMatrix::from_columns(ordered.len(), &hit_vectors(k, d, &ordered, &index))
}

#[derive(Clone, Debug)]
pub struct HitBasis {
    pub k: usize,
    pub d: u32,
    pub ordered: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Positions in `ordered` of the admissible monomials, ascending.
    pub admissible: Vec<usize>,
    /// Position in `admissible` for each ordered monomial, if admissible.
    adm_pos: Vec<Option<usize>>,
    /// Coordinates of every ordered monomial in the admissible basis.
    pub decomposition: Vec<BitVec>,
    /// For each admissible `a`: the ordered monomials whose decomposition uses `a`,
    /// excluding `a` itself.
    uses: Vec<BitVec>,
}

impl HitBasis {
    /// A monomial is admissible when it is not congruent, modulo hit elements,
    /// to a sum of monomials before it. Elimination keeps each pivot at the
    /// highest set position; after back-substitution the pivot row of a
    /// non-admissible `m` is `m` plus its admissible expansion.
    pub fn compute(k: usize, d: u32) -> HitBasis {
        let ordered = ordered_monomials(k, d);
        let index = index_of(&ordered);
        let n = ordered.len();
        let mut pivot_rows: Vec<Option<BitVec>> = vec![None; n];
        for mut v in hit_vectors(k, d, &ordered, &index) {
            while let Some(h) = v.highest_one() {
                match &pivot_rows[h] {
                    Some(r) => v.xor_assign_below(r, h + 1),
                    None => {
                        pivot_rows[h] = Some(v);
                        break;
                    }
                }
            }
        }
        for p in 0..n {
            let Some(mut row) = pivot_rows[p].take() else { continue };
            let mut q = p;
            while let Some(b) = row.highest_one_below(q) {
                if let Some(r) = &pivot_rows[b] {
                    row.xor_assign_below(r, b + 1);
                }
                q = b;
            }
            pivot_rows[p] = Some(row);
        }
        let admissible: Vec<usize> = (0..n).filter(|&i| pivot_rows[i].is_none()).collect();
        let mut adm_pos = vec![None; n];
        for (j, &i) in admissible.iter().enumerate() {
            adm_pos[i] = Some(j);
        }
        let na = admissible.len();
        let decomposition: Vec<BitVec> = (0..n)
            .map(|i| match (&pivot_rows[i], adm_pos[i]) {
                (None, Some(j)) => BitVec::unit(na, j),
                (Some(row), _) => BitVec::from_ones(na, row.ones().filter(|&b| b != i).map(|b| adm_pos[b].expect("reduced row"))),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::assemble(k, d, ordered, index, admissible, adm_pos, decomposition)
    }

    /// Rebuilds a basis from stored parts, checking the shape invariants.
    pub fn from_parts(k: usize, d: u32, admissible: &[Monomial], decomposition: Vec<BitVec>) -> Result<HitBasis> {
        let ordered = ordered_monomials(k, d);
        let index = index_of(&ordered);
        let bad = |msg: String| Err(Error::Internal(msg));
        if decomposition.len() != ordered.len() {
            return bad(format!("expected {} decomposition rows, got {}", ordered.len(), decomposition.len()));
        }
        let mut adm_idx = Vec::with_capacity(admissible.len());
        for m in admissible {
            match index.get(m) {
                Some(&i) => adm_idx.push(i),
                None => return bad(format!("admissible monomial {:?} has wrong shape", m.0)),
            }
        }
        if adm_idx.windows(2).any(|w| w[0] >= w[1]) {
            return bad("admissible monomials out of order".into());
        }
        let na = adm_idx.len();
        let mut adm_pos = vec![None; ordered.len()];
        for (j, &i) in adm_idx.iter().enumerate() {
            adm_pos[i] = Some(j);
        }
        for (i, v) in decomposition.iter().enumerate() {
            if v.len() != na {
                return bad(format!("row {i} has {} coordinates, expected {na}", v.len()));
            }
            if let Some(j) = adm_pos[i] {
                if *v != BitVec::unit(na, j) {
                    return bad(format!("admissible row {i} is not a unit vector"));
                }
            }
        }
        Ok(Self::assemble(k, d, ordered, index, adm_idx, adm_pos, decomposition))
    }

    fn assemble(
        k: usize,
        d: u32,
        ordered: Vec<Monomial>,
        index: HashMap<Monomial, usize>,
        admissible: Vec<usize>,
        adm_pos: Vec<Option<usize>>,
        decomposition: Vec<BitVec>,
    ) -> HitBasis {
        let n = ordered.len();
        let mut uses = vec![BitVec::zeros(n); admissible.len()];
        for (i, v) in decomposition.iter().enumerate() {
            if adm_pos[i].is_none() {
                for a in v.ones() {
                    uses[a].set(i, true);
                }
            }
        }
        HitBasis { k, d, ordered, index, admissible, adm_pos, decomposition, uses }
    }

    /// True iff every hit vector decomposes to zero.
    pub fn kills_hit_vectors(&self) -> bool {
        hit_vectors(self.k, self.d, &self.ordered, &self.index).par_iter().all(|v| {
            let mut acc = BitVec::zeros(self.dim());
            for i in v.ones() {
                acc.xor_assign(&self.decomposition[i]);
            }
            acc.is_zero()
        })
    }

    pub fn dim(&self) -> usize {
        self.admissible.len()
    }

    pub fn admissible_monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.admissible.iter().map(|&i| &self.ordered[i])
    }

    pub fn admissible_monomial(&self, j: usize) -> &Monomial {
        &self.ordered[self.admissible[j]]
    }

    pub fn index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Position of `m` among the admissible monomials.
    pub fn admissible_position(&self, m: &Monomial) -> Option<usize> {
        self.index(m).and_then(|i| self.adm_pos[i])
    }

    pub fn decompose_monomial(&self, m: &Monomial) -> Result<&BitVec> {
        self.index(m).map(|i| &self.decomposition[i]).ok_or_else(|| {
            Error::InvalidArgument(format!("monomial {:?} is not of degree {} in {} variables", m.0, self.d, self.k))
        })
    }

    /// Coordinates of `f` in the admissible basis; zero iff `f` is hit.
    pub fn decompose(&self, f: &Poly2) -> Result<BitVec> {
        let mut out = BitVec::zeros(self.dim());
        for m in f {
            out.xor_assign(self.decompose_monomial(m)?);
        }
        Ok(out)
    }

    /// The polynomial `Σ v_j · b_j` over the admissible basis.
    pub fn from_coordinates(&self, v: &BitVec) -> Poly2 {
        v.ones().map(|j| self.admissible_monomial(j).clone()).collect()
    }

    /// Admissible monomials with and without a zero exponent.
    pub fn zero_plus_split(&self) -> (Vec<Monomial>, Vec<Monomial>) {
        self.admissible_monomials().cloned().partition(|m| m.has_zero())
    }

    /// Pairings of `x` with the hit relations `m + expansion(m)`, one coordinate
    /// per ordered monomial (admissible positions are always 0). Since the
    /// dual squares are adjoint to the squares, `x` is killed by every
    /// `Sq_*^(2^t)` exactly when this vector vanishes.
    pub fn annihilator_image(&self, x: &DividedPoly) -> Result<BitVec> {
        let mut out = BitVec::zeros(self.ordered.len());
        for m in x {
            let i = self.index(m).ok_or_else(|| Error::InvalidArgument(format!("term {:?} has the wrong shape", m.0)))?;
            match self.adm_pos[i] {
                Some(a) => out.xor_assign(&self.uses[a]),
                None => out.flip(i),
            }
        }
        Ok(out)
    }

    /// The annihilated element dual to admissible basis vector `j`:
    /// `a^(b_j)` plus every `a^(m)` whose expansion uses `b_j`.
    pub fn primitive(&self, j: usize) -> DividedPoly {
        let mut out: DividedPoly = self.uses[j].ones().map(|i| self.ordered[i].clone()).collect();
        out.toggle(self.admissible_monomial(j).clone());
        out
    }
}

//! The divided power algebra Γ[a_1, ..., a_k] (the homology of B(Z/2)^k),
//! its right action of the dual squares, and the pairing with P_k.
//!
//! Tuples are indexed by subscript: entry `i` is the divided power of `a_{i+1}`.

use crate::gf2::binom_mod2;
use crate::poly::{Monomial, Poly2};

pub type DividedMonomial = Monomial;
pub type DividedPoly = Poly2;

/// `(a^(I)) Sq_*^j`: sum over splittings `j = Σ j_t` of `Π C(i_t - j_t, j_t) a^(i_t - j_t)`.
pub fn sq_star(m: &DividedMonomial, j: u32) -> DividedPoly {
    let mut out = DividedPoly::zero();
    let mut cur = m.0.clone();
    fn rec(j: u32, idx: usize, src: &[u32], cur: &mut Vec<u32>, out: &mut DividedPoly) {
        if idx == src.len() {
            if j == 0 {
                out.toggle(Monomial(cur.clone()));
            }
            return;
        }
        let t = src[idx];
        // C(t - s, s) vanishes once 2s > t.
        for s in 0..=j.min(t / 2) {
            if binom_mod2((t - s) as i64, s as i64) {
                cur[idx] = t - s;
                rec(j - s, idx + 1, src, cur, out);
            }
        }
        cur[idx] = t;
    }
    rec(j, 0, &m.0, &mut cur, &mut out);
    out
}

pub fn sq_star_poly(x: &DividedPoly, j: u32) -> DividedPoly {
    let mut out = DividedPoly::zero();
    for m in x {
        out.add_assign(&sq_star(m, j));
    }
    out
}

/// The operations checked: `Sq_*^(2^t)` for `t = 0 ..= floor(log2 deg)`.
pub fn annihilation_checks(deg: u32) -> Vec<u32> {
    (0..32).map(|t| 1u32 << t).take_while(|&p| p <= deg).collect()
}

/// Killed by every `Sq_*^(2^t)` with `2^t ≤ deg x`; these generate the dual action.
pub fn is_a_annihilated(x: &DividedPoly) -> bool {
    let Some(first) = x.iter().next() else { return true };
    annihilation_checks(first.degree()).into_iter().all(|p| sq_star_poly(x, p).is_zero())
}

/// Parity of the number of exponent tuples common to both sides.
pub fn pairing(u: &DividedPoly, v: &Poly2) -> bool {
    u.iter().filter(|m| v.contains(m)).count() % 2 == 1
}

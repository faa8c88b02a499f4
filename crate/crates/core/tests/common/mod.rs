#![allow(dead_code)]

use std::path::PathBuf;

use cohit::divided::DividedPoly;
use cohit::gf2::{binom_mod2, BitVec};
use cohit::hit::HitBasis;
use cohit::lambda::{LambdaPoly, Word};
use cohit::poly::{apply_rho, Monomial, Poly2};

pub fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn lambda(s: &str) -> LambdaPoly {
    LambdaPoly::parse(s, None).unwrap()
}

pub fn divided(s: &str, k: usize) -> DividedPoly {
    DividedPoly::parse(s, Some(k)).unwrap()
}

pub fn poly(s: &str, k: usize) -> Poly2 {
    Poly2::parse(s, Some(k)).unwrap()
}

pub fn mono(v: &[u32]) -> Monomial {
    Monomial(v.to_vec())
}

/// Lines of the form "label : payload".
pub fn labelled(name: &str) -> Vec<(String, String)> {
    fixture(name)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (a, b) = l.split_once(" : ").expect("labelled line");
            (a.trim().to_string(), b.trim().to_string())
        })
        .collect()
}

pub fn labelled_value(name: &str, label: &str) -> String {
    labelled(name).into_iter().find(|(l, _)| l == label).map(|(_, v)| v).unwrap_or_else(|| panic!("{label} in {name}"))
}

pub const C0_Y: &str = "3,3,2";
pub const D0_Y: &str = "3,3,2,6 + 3,3,4,4 + 3,5,4,2 + 3,5,3,3";
pub const D0_Z: &str = "3,3,9 + 3,9,3";
pub const D0_DELTA_Z: &str = "3,3,5,3 + 3,3,3,5";
pub const P0_Y: &str = "7,7,5,14 + 7,7,9,10 + 7,11,9,6";
pub const YBAR: &str = "6,2,3,3 + 4,4,3,3 + 2,4,5,3 + 1,5,1,7";
pub const R_POLY: &str = "1,5,5,3 + 2,3,6,3 + 2,5,4,3 + 4,3,4,3 + 1,3,3,7 + 2,4,5,3 + 4,4,3,3";
pub const DELTA_R_PRINTED: &str =
    "4,3,2,1,3 + 4,2,1,3,3 + 3,2,2,3,3 + 2,1,4,3,3 + 1,2,4,3,3 + 2,1,3,4,3 + 1,2,3,4,3 + 2,2,1,5,3 + 2,1,2,5,3";

/// The triple-sum formula for φ_3(a_3^(t3) a_2^(t2) a_1^(t1)).
pub fn closed_k3(t1: u32, t2: u32, t3: u32) -> LambdaPoly {
    let (t1, t2, t3) = (t1 as i64, t2 as i64, t3 as i64);
    let total = t1 + t2 + t3;
    let mut out = LambdaPoly::zero();
    for i1 in t1..=total {
        for u1 in 0..=(i1 - t1) {
            let u2 = i1 - t1 - u1;
            for i2 in (t2 - u2).max(0)..=total - i1 {
                let i3 = total - i1 - i2;
                if binom_mod2(t3 - u1, u1) && binom_mod2(t2 - u2, u2) && binom_mod2(i3, i2 + u2 - t2) {
                    out.toggle(Word(vec![i1 as u32, i2 as u32, i3 as u32]));
                }
            }
        }
    }
    out
}

/// Dimension of the subspace of (Q P_k)_d fixed by every ρ_j, by enumeration.
pub fn brute_glk_dim(b: &HitBasis) -> usize {
    let n = b.dim();
    assert!(n <= 16);
    let fixed = (0u64..1 << n)
        .filter(|&i| {
            let v = BitVec::from_ones(n, (0..n).filter(|j| i >> j & 1 == 1));
            let p = b.from_coordinates(&v);
            (1..=b.k).all(|j| b.decompose(&apply_rho(&p, j, b.k).unwrap().add(&p)).unwrap().is_zero())
        })
        .count();
    fixed.trailing_zeros() as usize
}


//! The polynomial algebra F_2[x_1, ..., x_k] with its Steenrod squares,
//! weight vectors, monomial order and the GL_k generators.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gf2::binom_mod2;
use crate::sum::{compositions, F2Sum, Tuple};

/// Exponent tuple; entry `i` is the exponent of `x_{i+1}`.
/// Also used for divided-power tuples, where entry `i` is the power of `a_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn has_zero(&self) -> bool {
        self.0.contains(&0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.k(), other.k(), "variable count mismatch");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Display form, e.g. `x1*x2^14*x3^15*x4^3`.
    pub fn to_x_string(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Tuple for Monomial {
    fn entries(&self) -> &[u32] {
        &self.0
    }
    fn from_entries(v: Vec<u32>) -> Self {
        Monomial(v)
    }
}

pub type Poly2 = F2Sum<Monomial>;

impl Poly2 {
    pub fn mul(&self, other: &Poly2) -> Poly2 {
        self.iter().flat_map(|a| other.iter().map(move |b| a.mul(b))).collect()
    }
}

/// All monomials of degree `d` in `k` variables, lex ascending on exponents.
pub fn monomials_of_degree(k: usize, d: u32) -> Vec<Monomial> {
    compositions(d, k, 0).into_iter().map(Monomial).collect()
}

/// `Sq^n` of one monomial by the Cartan formula; `Sq^j(x^a) = C(a, j) x^(a+j)`.
pub fn sq_monomial(n: u32, m: &Monomial) -> Poly2 {
    let mut out = Poly2::zero();
    let mut cur = m.0.clone();
    fn rec(n: u32, idx: usize, src: &[u32], cur: &mut Vec<u32>, out: &mut Poly2) {
        if idx == src.len() {
            if n == 0 {
                out.toggle(Monomial(cur.clone()));
            }
            return;
        }
        let a = src[idx];
        // Odd C(a, j) needs j's bits inside a's bits: walk the submasks of a.
        let mut j = a;
        loop {
            if j <= n {
                cur[idx] = a + j;
                rec(n - j, idx + 1, src, cur, out);
            }
            if j == 0 {
                break;
            }
            j = (j - 1) & a;
        }
        cur[idx] = a;
    }
    rec(n, 0, &m.0, &mut cur, &mut out);
    out
}

pub fn sq(n: u32, f: &Poly2) -> Poly2 {
    let mut out = Poly2::zero();
    for m in f {
        out.add_assign(&sq_monomial(n, m));
    }
    out
}

/// `ω_j` counts exponents whose bit `j-1` is set; trailing zeros stripped.
pub fn weight_vector(m: &Monomial) -> Vec<u32> {
    let top = m.0.iter().map(|e| 32 - e.leading_zeros()).max().unwrap_or(0);
    (0..top).map(|j| m.0.iter().filter(|&&e| e >> j & 1 == 1).count() as u32).collect()
}

pub fn weight_degree(w: &[u32]) -> u64 {
    w.iter().enumerate().map(|(j, &c)| (c as u64) << j).sum()
}

/// Lexicographic with the shorter vector padded by zeros.
pub fn compare_weights(a: &[u32], b: &[u32]) -> Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let (x, y) = (a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

/// Weight vectors first, then exponent tuples.
pub fn compare_monomials(a: &Monomial, b: &Monomial) -> Ordering {
    compare_weights(&weight_vector(a), &weight_vector(b)).then_with(|| a.0.cmp(&b.0))
}

/// `ρ_j` for `j < k` swaps `x_j` and `x_{j+1}`; `ρ_k` sends `x_k` to `x_k + x_{k-1}`.
pub fn apply_rho(p: &Poly2, j: usize, k: usize) -> Result<Poly2> {
    if j == 0 || j > k || (j == k && k < 2) {
        return Err(Error::InvalidArgument(format!("rho_{j} is undefined for k = {k}")));
    }
    let mut out = Poly2::zero();
    for m in p {
        if m.k() != k {
            return Err(Error::InvalidArgument(format!("monomial {:?} does not have {k} variables", m.0)));
        }
        if j < k {
            let mut e = m.0.clone();
            e.swap(j - 1, j);
            out.toggle(Monomial(e));
        } else {
            let (a, b) = (m.0[k - 2], m.0[k - 1]);
            for s in 0..=b {
                if binom_mod2(b as i64, s as i64) {
                    let mut e = m.0.clone();
                    e[k - 2] = a + b - s;
                    e[k - 1] = s;
                    out.toggle(Monomial(e));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(v: &[u32]) -> Monomial {
        Monomial(v.to_vec())
    }

    #[test]
    fn counts() {
        assert_eq!(monomials_of_degree(4, 33).len(), 7140);
        assert_eq!(monomials_of_degree(1, 5), vec![mono(&[5])]);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 0), vec![mono(&[0, 0])]);
    }

    #[test]
    fn squares() {
        assert_eq!(sq_monomial(1, &mono(&[1])), Poly2::single(mono(&[2])));
        assert!(sq_monomial(2, &mono(&[1])).is_zero());
        assert_eq!(sq_monomial(2, &mono(&[1, 1])), Poly2::single(mono(&[2, 2])));
        let u = mono(&[3, 0, 5]);
        assert_eq!(sq_monomial(8, &u), Poly2::single(mono(&[6, 0, 10])));
        assert!(sq_monomial(9, &u).is_zero());
    }

    #[test]
    fn weights() {
        assert_eq!(weight_vector(&mono(&[6, 5])), vec![1, 1, 2]);
        assert!(weight_vector(&mono(&[0, 0])).is_empty());
        assert_eq!(weight_vector(&mono(&[7, 7, 9, 10])), vec![3, 3, 2, 2]);
        assert_eq!(compare_monomials(&mono(&[5, 6]), &mono(&[6, 5])), Ordering::Less);
    }

    #[test]
    fn rho() {
        let x1 = Poly2::single(mono(&[1, 0, 0]));
        assert_eq!(apply_rho(&x1, 1, 3).unwrap(), Poly2::single(mono(&[0, 1, 0])));
        let x3 = Poly2::single(mono(&[0, 0, 1]));
        let img: Poly2 = [mono(&[0, 0, 1]), mono(&[0, 1, 0])].into_iter().collect();
        assert_eq!(apply_rho(&x3, 3, 3).unwrap(), img);
        assert!(apply_rho(&x1, 4, 3).is_err());
        assert!(apply_rho(&Poly2::single(mono(&[1])), 1, 1).is_err());
    }
}

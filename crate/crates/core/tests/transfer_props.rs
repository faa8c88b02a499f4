mod common;

use cohit::divided::sq_star;
use cohit::gf2::binom_mod2;
use cohit::lambda::{adem_reduce, LambdaPoly, Word};
use cohit::poly::Monomial;
use cohit::transfer::{transfer, transfer_poly, transfer_sum_variant, Transfer, Variant};
use common::{divided, fixture, labelled_value, lambda};
use proptest::prelude::*;

fn b(n: i64, k: i64) -> bool {
    binom_mod2(n, k)
}

/// The quadruple-sum formula for φ_4(a_4^(t4) .. a_1^(t1)), lower bounds clamped at 0.
fn closed_k4(t1: u32, t2: u32, t3: u32, t4: u32) -> LambdaPoly {
    let (t1, t2, t3, t4) = (t1 as i64, t2 as i64, t3 as i64, t4 as i64);
    let total = t1 + t2 + t3 + t4;
    let mut out = LambdaPoly::zero();
    for i1 in t1..=total {
        for k1 in 0..=(i1 - t1) {
            for k2 in 0..=(i1 - t1 - k1) {
                let k3 = i1 - t1 - k1 - k2;
                if !(b(t4 - k1, k1) && b(t3 - k2, k2) && b(t2 - k3, k3)) {
                    continue;
                }
                for i2 in (t2 - k3).max(0)..=total - i1 {
                    for u1 in 0..=(i2 + k3 - t2) {
                        let u2 = i2 + k3 - t2 - u1;
                        if !(b(t4 - k1 - u1, u1) && b(t3 - k2 - u2, u2)) {
                            continue;
                        }
                        for i3 in (t3 - k2 - u2).max(0)..=total - i1 - i2 {
                            let i4 = total - i1 - i2 - i3;
                            if b(i4, i3 + k2 + u2 - t3) {
                                out.toggle(Word(vec![i1 as u32, i2 as u32, i3 as u32, i4 as u32]));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// The recursion with the index running all the way to the degree.
fn loose(m: &[u32], sum_variant: bool) -> LambdaPoly {
    if m.len() == 1 {
        return LambdaPoly::single(Word(m.to_vec()));
    }
    let (head, rest) = if sum_variant { (m[m.len() - 1], &m[..m.len() - 1]) } else { (m[0], &m[1..]) };
    let top = head + rest.iter().sum::<u32>();
    let mut out = LambdaPoly::zero();
    for i in head..=top {
        for r in sq_star(&Monomial(rest.to_vec()), i - head) {
            for w in loose(&r.0, sum_variant) {
                let v = if sum_variant { [w.0.as_slice(), &[i]].concat() } else { [&[i][..], w.0.as_slice()].concat() };
                out.toggle(Word(v));
            }
        }
    }
    out
}

#[test]
fn closed_formula_k3() {
    for t1 in 0..=6 {
        for t2 in 0..=6 {
            for t3 in 0..=6 {
                let m = Monomial(vec![t1, t2, t3]);
                let closed = common::closed_k3(t1, t2, t3);
                let rec = transfer(&m);
                assert_eq!(rec, closed, "raw φ_3 at {:?}", m.0);
                assert_eq!(adem_reduce(&rec), adem_reduce(&closed));
            }
        }
    }
}

#[test]
fn closed_formula_k4() {
    let mut t = Transfer::new(Variant::ChonHa);
    for code in 0..5u32.pow(4) {
        let e: Vec<u32> = (0..4).map(|i| code / 5u32.pow(i) % 5).collect();
        let m = Monomial(e.clone());
        assert_eq!(t.monomial(&m), closed_k4(e[0], e[1], e[2], e[3]), "φ_4 at {e:?}");
    }
}

#[test]
fn tight_bound_matches_loose_bound() {
    for code in 0..6u32.pow(3) {
        let e: Vec<u32> = (0..3).map(|i| code / 6u32.pow(i) % 6).collect();
        let m = Monomial(e.clone());
        assert_eq!(transfer(&m), loose(&e, false));
        assert_eq!(transfer_sum_variant(&m), loose(&e, true));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tight_bound_random(e in proptest::collection::vec(0u32..9, 2..=4), sum_variant in any::<bool>()) {
        let m = Monomial(e.clone());
        let t = if sum_variant { transfer_sum_variant(&m) } else { transfer(&m) };
        prop_assert_eq!(&t, &loose(&e, sum_variant));
        for w in &t {
            prop_assert_eq!(w.len(), e.len());
            prop_assert_eq!(w.degree(), m.degree());
        }
    }
}

#[test]
fn c0_and_p0_images() {
    let c0 = divided(&fixture("divided_c0.txt"), 3);
    assert_eq!(adem_reduce(&transfer_poly(&c0, Variant::ChonHa)), lambda(common::C0_Y));
    let p0 = divided(&fixture("divided_p0.txt"), 4);
    assert_eq!(p0.len(), 62);
    assert_eq!(adem_reduce(&transfer_poly(&p0, Variant::ChonHa)), lambda(common::P0_Y));
}

#[test]
fn d0_image_is_target_plus_remainder() {
    // The remainder is λ_3 λ_5 λ_3^2 + λ_3^3 λ_5, the image of z under the literal differential.
    let d0 = divided(&fixture("divided_d0.txt"), 4);
    assert_eq!(d0.len(), 36);
    let mut expect = lambda(common::D0_Y);
    expect.add_assign(&lambda("3,5,3,3 + 3,3,3,5"));
    assert_eq!(adem_reduce(&transfer_poly(&d0, Variant::ChonHa)), adem_reduce(&expect));
}

#[test]
fn sum_variant_on_q43() {
    let q = divided(&fixture("q43.txt"), 4);
    assert_eq!(q.len(), 36);
    let raw = transfer_poly(&q, Variant::Sum);
    assert_eq!(raw, lambda(&labelled_value("sum_q43_output.txt", "unreduced")));
    assert_eq!(adem_reduce(&raw), lambda(&labelled_value("sum_q43_output.txt", "reduced")));
    assert_eq!(raw.len(), 11);
    assert_eq!(adem_reduce(&raw).len(), 5);
}

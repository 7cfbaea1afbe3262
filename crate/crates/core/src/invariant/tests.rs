use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::localfield::{parse_polynomial, FieldTag, Gf};

fn delta(src: &str, p: u32) -> InvariantProfile {
    let gf = Gf::get(p, 1).unwrap();
    InvariantProfile::new(
        MonicPoly::from_coeffs(gf, parse_polynomial(src, p, FieldTag::Base).unwrap()).unwrap(),
    )
    .unwrap()
}

fn t(gf: &'static Gf, k: i64) -> LocalElement {
    LocalElement::t_pow(gf, k)
}

#[test]
fn linear_invariants() {
    let gf = Gf::get(3, 1).unwrap();
    let p = inv_linear(&Matrix::diagonal(gf, &[t(gf, 1), t(gf, 2)])).unwrap();
    assert_eq!(p.delta, delta("(T - t)*(T - t^2)", 3).delta);
    assert!(p.is_regular_semisimple());

    let z = LocalElement::zero(gf);
    let one = LocalElement::one(gf);
    let comp = Matrix::from_rows(gf, vec![vec![z, t(gf, 1)], vec![one, t(gf, 1)]]).unwrap();
    assert_eq!(
        inv_linear(&comp).unwrap().delta,
        delta("T^2 - t*T - t", 3).delta
    );

    let rep = inv_linear(&Matrix::scalar(gf, 2, &t(gf, 1))).unwrap();
    assert!(rep.profile.is_some());
    assert!(!rep.is_regular_semisimple());
}

#[test]
fn quaternion_invariants() {
    let e = Gf::get(3, 2).unwrap();
    let f = Gf::get(3, 1).unwrap();
    let u = LocalElement::constant(e, e.w());
    let nm = LocalElement::constant(f, e.norm(e.w()));
    let p = inv_quaternion(&Matrix::scalar(e, 1, &u), Lambda::Half).unwrap();
    assert_eq!(p.delta, MonicPoly::from_roots(f, &[nm.shift(1)]));
    let p = inv_quaternion(&Matrix::scalar(e, 1, &t(e, 1)), Lambda::Zero).unwrap();
    assert_eq!(p.delta, delta("T - t^2", 3).delta);
    let d = Matrix::diagonal(e, &[LocalElement::one(e), u]);
    let p = inv_quaternion(&d, Lambda::Zero).unwrap();
    assert_eq!(
        p.delta,
        MonicPoly::from_roots(f, &[LocalElement::one(f), nm])
    );
}

#[test]
fn general_invariants() {
    let gf = Gf::get(3, 1).unwrap();
    let x = Matrix::diagonal(gf, &[t(gf, 1), t(gf, 2)]);
    let id = Matrix::identity(gf, 2);
    let gamma = Matrix::block(&id, &x, &id, &id);
    assert_eq!(
        inv_general(&gamma).unwrap().delta,
        inv_linear(&x).unwrap().delta
    );

    let zero = Matrix::zeros(gf, 2, 2);
    assert!(matches!(
        inv_general(&Matrix::block(&id, &zero, &id, &id)),
        Err(Error::NotRegular(_))
    ));

    // z² = t on a rank-2 block-scalar element
    let tt = Matrix::scalar(gf, 2, &t(gf, 1));
    let p = inv_general(&Matrix::block(&id, &tt, &id, &id)).unwrap();
    assert_eq!(p.delta, delta("(T - t)^2", 3).delta);
    assert!(!p.is_regular_semisimple());
}

#[test]
fn matching() {
    let e = Gf::get(3, 2).unwrap();
    let gf = Gf::get(3, 1).unwrap();
    let lin = inv_linear(&Matrix::scalar(gf, 1, &t(gf, 2))).unwrap();
    let quat = inv_quaternion(
        &Matrix::scalar(e, 1, &LocalElement::constant(e, e.w())),
        Lambda::Half,
    )
    .unwrap();
    assert!(!match_test(&lin, &quat).unwrap());
    assert!(match_test(&lin, &lin.clone()).unwrap());
    let bad = inv_linear(&Matrix::scalar(gf, 2, &t(gf, 1))).unwrap();
    assert!(match_test(&bad, &bad).is_err());
}

#[test]
fn vanishing_orders_and_signs() {
    assert_eq!(ord_lambda(&delta("T - t", 3), Lambda::Zero).unwrap(), 1);
    assert_eq!(ord_lambda(&delta("T - t^2", 3), Lambda::Half).unwrap(), 1);
    assert_eq!(ord_lambda(&delta("T - 2*t", 3), Lambda::Half).unwrap(), 0);
    assert_eq!(ord_lambda(&delta("T - t", 3), Lambda::Zero).unwrap(), 1);

    assert_eq!(epsilon_sign(&delta("T - t^2", 3)).unwrap(), -1);
    assert_eq!(epsilon_sign(&delta("T - 2*t", 3)).unwrap(), 1);
    assert_eq!(epsilon_sign(&delta("(T - t)*(T - t^2)", 3)).unwrap(), -1);

    assert!(matching_exists(&delta("T - 2*t", 3), Lambda::Half).unwrap());
    assert!(!matching_exists(&delta("T - t^2", 3), Lambda::Half).unwrap());
    assert!(!matching_exists(&delta("T - t", 3), Lambda::Zero).unwrap());
}

#[test]
fn rank_one_division_by_valuation_parity() {
    // B ⊗ F splits at a rank-1 factor iff v(a) is even
    for v in -3..6 {
        let gf = Gf::get(5, 1).unwrap();
        let p = InvariantProfile::new(MonicPoly::from_roots(
            gf,
            &[LocalElement::from_int_terms(gf, &[(v, 2), (v + 1, 1)])],
        ));
        let p = p.unwrap();
        assert_eq!(
            ord_lambda(&p, Lambda::Zero).unwrap(),
            (v.rem_euclid(2) == 1) as u32
        );
        assert_eq!(
            ord_lambda(&p, Lambda::Half).unwrap(),
            (v.rem_euclid(2) == 0) as u32
        );
    }
}

#[test]
fn irreducible_factors() {
    // T^2 - t: ramified, d = 2, root valuation 1 in L, f = 1
    let p = delta("T^2 - t", 3);
    assert_eq!(ord_lambda(&p, Lambda::Zero).unwrap(), 1);
    assert_eq!(ord_lambda(&p, Lambda::Half).unwrap(), 1);
    // T^2 - t*T + ... with an unramified quadratic factor: f = 2 never divides
    let p = delta("T^2 + t^2", 3);
    assert_eq!(ord_lambda(&p, Lambda::Zero).unwrap(), 0);
    assert_eq!(ord_lambda(&p, Lambda::Half).unwrap(), 0);
}

#[test]
fn shift_classification() {
    let s = shift_invariant(&delta("T - t^2", 3)).unwrap();
    assert_eq!(s.class, ShiftClass::TopNilpotent);
    assert_eq!(s.profile.delta, delta("T - t", 3).delta);
    let s = shift_invariant(&delta("T - 1", 3)).unwrap();
    assert_eq!(s.class, ShiftClass::NonIntegral);
    let s = shift_invariant(&delta("(T - t)*(T - t^2)", 3)).unwrap();
    assert_eq!(s.class, ShiftClass::IntegralUnitPart);
    assert_eq!(s.profile.delta, delta("(T - 1)*(T - t)", 3).delta);
    assert!(!s.profile.nonzero_at_one);
}

fn random_delta(rng: &mut ChaCha8Rng, gf: &'static Gf, n: usize) -> MonicPoly {
    let mut coeffs: Vec<LocalElement> = (0..n)
        .map(|_| {
            let terms: Vec<(i64, i64)> = (0..3)
                .map(|_| (rng.gen_range(-1..5), rng.gen_range(0..gf.order() as i64)))
                .collect();
            LocalElement::from_int_terms(gf, &terms)
        })
        .collect();
    coeffs.push(LocalElement::one(gf));
    MonicPoly::from_coeffs(gf, coeffs).unwrap()
}

#[test]
fn shift_identity_and_sign_parity_on_random_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 60 {
        let p = [2, 3, 5][rng.gen_range(0..3)];
        let gf = Gf::get(p, 1).unwrap();
        let n = rng.gen_range(1..=4);
        let Ok(prof) = InvariantProfile::new(random_delta(&mut rng, gf, n)) else {
            continue;
        };
        if !prof.is_regular_semisimple() {
            continue;
        }
        let Ok(half) = ord_lambda(&prof, Lambda::Half) else {
            continue;
        };
        let sign = if half % 2 == 0 { 1 } else { -1 };
        assert_eq!(epsilon_sign(&prof).unwrap(), sign, "{:?}", prof.delta);
        let shifted = shift_invariant(&prof).unwrap();
        // ord_0 counts only factor data, which stays defined when δ̃(1) = 0
        let entries = &shifted.profile.profile.as_ref().unwrap().entries;
        let ord0 = entries.iter().filter(|e| is_division(e)).count() as u32;
        assert_eq!(half, ord0, "{:?}", prof.delta);
        checked += 1;
    }
}

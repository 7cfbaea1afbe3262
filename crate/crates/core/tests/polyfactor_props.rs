use orbint::localfield::{Gf, LocalElement};
use orbint::polyfactor::{
    hensel_split_to, newton_profile, poly_sqrt, FactorEntry, MonicPoly, Poly,
};
use proptest::prelude::*;

fn element(gf: &'static Gf, terms: &[(i64, u16)]) -> LocalElement {
    let t: Vec<(i64, u16)> = terms
        .iter()
        .map(|&(e, c)| (e, c % gf.order() as u16))
        .collect();
    LocalElement::from_terms(gf, &t)
}

fn monic(gf: &'static Gf, coeffs: &[Vec<(i64, u16)>]) -> MonicPoly {
    let mut c: Vec<LocalElement> = coeffs.iter().map(|t| element(gf, t)).collect();
    c.push(LocalElement::one(gf));
    MonicPoly::from_coeffs(gf, c).unwrap()
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn coeff(lo: i64) -> impl Strategy<Value = Vec<(i64, u16)>> {
    prop::collection::vec((lo..5i64, 0u16..49), 0..3)
}

/// Factors with known profile entries.
#[derive(Debug, Clone)]
enum Piece {
    Linear { a: i64, r: u16 },
    Ramified { k: i64 },
    Unramified { k: i64 },
}

fn nonresidue(p: u32) -> i64 {
    match p {
        3 => 2,
        5 => 2,
        7 => 3,
        _ => unreachable!(),
    }
}

impl Piece {
    fn poly(&self, gf: &'static Gf) -> Poly {
        let p = gf.prime();
        let c = |terms: &[(i64, i64)]| LocalElement::from_int_terms(gf, terms);
        let coeffs = match *self {
            Piece::Linear { a, r } => vec![c(&[(a, -(r as i64))]), c(&[(0, 1)])],
            // T^2 + t^{k+1} T + t^{2k+1}
            Piece::Ramified { k } => vec![c(&[(2 * k + 1, 1)]), c(&[(k + 1, 1)]), c(&[(0, 1)])],
            Piece::Unramified { k } if p == 2 => {
                vec![c(&[(2 * k, 1)]), c(&[(k, 1)]), c(&[(0, 1)])]
            }
            Piece::Unramified { k } => {
                vec![c(&[(2 * k, -nonresidue(p))]), c(&[]), c(&[(0, 1)])]
            }
        };
        Poly::new(gf, coeffs)
    }

    fn entry(&self) -> FactorEntry {
        match *self {
            Piece::Linear { a, .. } => FactorEntry { e: 1, f: 1, c: a },
            Piece::Ramified { k } => FactorEntry {
                e: 2,
                f: 1,
                c: 2 * k + 1,
            },
            Piece::Unramified { k } => FactorEntry {
                e: 1,
                f: 2,
                c: 2 * k,
            },
        }
    }

    fn root_key(&self) -> Option<(i64, u16)> {
        match *self {
            Piece::Linear { a, r } => Some((a, r)),
            _ => None,
        }
    }
}

fn pieces(p: u32) -> impl Strategy<Value = Vec<Piece>> {
    let linear = (-2i64..4, 1u16..p as u16).prop_map(|(a, r)| Piece::Linear { a, r });
    let other = prop_oneof![
        (-2i64..3).prop_map(|k| Piece::Ramified { k }),
        (-2i64..3).prop_map(|k| Piece::Unramified { k }),
    ];
    (prop::collection::vec(linear, 0..4), prop::option::of(other)).prop_map(|(mut v, o)| {
        let mut seen = std::collections::HashSet::new();
        v.retain(|x| seen.insert(x.root_key()));
        v.extend(o);
        v
    })
}

fn sorted(mut v: Vec<FactorEntry>) -> Vec<FactorEntry> {
    v.sort_by_key(|e| (e.c, e.f, e.e));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sqrt_round_trip(p in prime(), cs in prop::collection::vec(coeff(-2), 1..4)) {
        let gf = Gf::get(p, 1).unwrap();
        let q = monic(gf, &cs);
        let sq = MonicPoly::new(q.poly().mul(q.poly())).unwrap();
        prop_assert_eq!(poly_sqrt(&sq).unwrap(), q);
    }

    #[test]
    fn hensel_reconstructs(p in prime(), cs in prop::collection::vec(coeff(0), 1..5)) {
        let gf = Gf::get(p, 1).unwrap();
        let poly = monic(gf, &cs);
        let n = 20;
        let (a, b) = hensel_split_to(&poly, n).unwrap();
        let err = poly.poly().sub(&a.poly().mul(b.poly()));
        prop_assert!(err.coeffs().iter().all(|c| c.valuation_or_bound() >= n));
        let mult = (0..=poly.degree()).take_while(|&i| poly.coeff(i).coeff(0) == 0).count();
        prop_assert_eq!(a.degree(), mult);
        prop_assert_ne!(b.coeff(0).coeff(0), 0);
    }

    #[test]
    fn profile_of_products_is_union((p, ps) in prime().prop_flat_map(|p| (Just(p), pieces(p)))) {
        prop_assume!(!ps.is_empty());
        let gf = Gf::get(p, 1).unwrap();
        let poly = ps.iter().fold(Poly::one(gf), |acc, x| acc.mul(&x.poly(gf)));
        let poly = MonicPoly::new(poly).unwrap();
        let prof = newton_profile(&poly).unwrap();
        prop_assert_eq!(prof.degree() as usize, poly.degree());
        prop_assert_eq!(sorted(prof.entries.clone()), sorted(ps.iter().map(Piece::entry).collect()));

        let rev = MonicPoly::new(poly.poly().reversal_monic(40).unwrap()).unwrap();
        let rprof = newton_profile(&rev).unwrap();
        let mut f1: Vec<u32> = prof.entries.iter().map(|e| e.f).collect();
        let mut f2: Vec<u32> = rprof.entries.iter().map(|e| e.f).collect();
        f1.sort();
        f2.sort();
        prop_assert_eq!(f1, f2);
        let negated = prof.entries.iter().map(|e| FactorEntry { c: -e.c, ..*e }).collect();
        prop_assert_eq!(sorted(rprof.entries), sorted(negated));
    }
}

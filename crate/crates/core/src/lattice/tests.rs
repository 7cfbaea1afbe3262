use super::*;

fn gf(p: u32, k: u32) -> &'static Gf {
    Gf::get(p, k).unwrap()
}

fn el(g: &'static Gf, terms: &[(i64, i64)]) -> LocalElement {
    LocalElement::from_int_terms(g, terms)
}

fn t(g: &'static Gf, k: i64) -> LocalElement {
    LocalElement::t_pow(g, k)
}

fn z(g: &'static Gf) -> LocalElement {
    LocalElement::zero(g)
}

fn one(g: &'static Gf) -> LocalElement {
    LocalElement::one(g)
}

#[test]
fn column_reduction_example() {
    let g = gf(3, 1);
    let l = canonicalize(&[vec![one(g), z(g)], vec![one(g), t(g, 1)]]).unwrap();
    let expected = Matrix::from_columns(g, 2, &[vec![one(g), z(g)], vec![z(g), t(g, 1)]]);
    assert_eq!(l.basis(), &expected);
}

#[test]
fn span_of_diagonal_vector_and_t() {
    let g = gf(3, 1);
    let l = canonicalize(&[
        vec![t(g, 1), z(g)],
        vec![z(g), t(g, 1)],
        vec![one(g), one(g)],
    ])
    .unwrap();
    // membership oracle: v lies in O(1,1) + tO^2 iff v_0 ≡ v_1 mod t and both integral
    let member = |v: &[LocalElement]| {
        v.iter().all(|e| e.is_integral()) && (&v[0] - &v[1]).valuation_or_bound() >= 1
    };
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let v = vec![el(g, &[(0, a), (1, b)]), el(g, &[(0, c), (2, b)])];
                assert_eq!(l.contains_vector(&v), member(&v), "{v:?}");
            }
        }
    }
    assert_eq!(l.pivot_exponents(), vec![1, 0]);
    let expected = Matrix::from_columns(g, 2, &[vec![t(g, 1), z(g)], vec![one(g), one(g)]]);
    assert_eq!(l.basis(), &expected);
}

#[test]
fn rank_deficient_input() {
    let g = gf(5, 1);
    assert!(matches!(
        canonicalize(&[vec![one(g), t(g, 1)]]),
        Err(Error::RankDeficient)
    ));
    assert!(matches!(
        canonicalize(&[vec![one(g), t(g, 1)], vec![t(g, 1), t(g, 2)]]),
        Err(Error::RankDeficient)
    ));
}

#[test]
fn index_examples() {
    let g = gf(3, 1);
    let o2 = LatticeBasis::standard(g, 2);
    let l = LatticeBasis::from_basis_matrix(&Matrix::diagonal(g, &[t(g, 1), t(g, 2)])).unwrap();
    assert_eq!(index(&o2, &l).unwrap(), 3);
    assert_eq!(index(&l, &l).unwrap(), 0);
    assert!(matches!(index(&l, &o2), Err(Error::NotContained)));
    let e = gf(3, 2);
    let oe = LatticeBasis::standard(e, 1);
    assert_eq!(index(&oe, &oe.scale_t(1)).unwrap(), 1);
}

#[test]
fn apply_examples() {
    let g = gf(5, 1);
    let o2 = LatticeBasis::standard(g, 2);
    let tt = Matrix::scalar(g, 2, &t(g, 1));
    let img = apply(&tt, &o2).unwrap();
    assert_eq!(img, o2.scale_t(1));
    assert_eq!(index(&o2, &img).unwrap(), 2);
    assert_eq!(apply(&Matrix::identity(g, 2), &img).unwrap(), img);

    let m = Matrix::from_rows(
        g,
        vec![
            vec![el(g, &[(0, 1), (1, 2)]), t(g, -1)],
            vec![t(g, 2), el(g, &[(0, 3)])],
        ],
    )
    .unwrap();
    let minv = m.inverse(60).unwrap();
    let l = canonicalize(&[vec![t(g, 1), one(g)], vec![z(g), t(g, 3)]]).unwrap();
    let back = apply(&m, &apply(&minv, &l).unwrap()).unwrap();
    assert_eq!(back, l);
    assert!(matches!(
        apply(&Matrix::zeros(g, 2, 2), &o2),
        Err(Error::RankDeficient)
    ));
}

#[test]
fn sigma_examples() {
    let e = gf(3, 2);
    let o2 = LatticeBasis::standard(e, 2);
    assert_eq!(conj_lattice(&o2).unwrap(), o2);
    let w = LocalElement::constant(e, e.w());
    let l = canonicalize(&[vec![w.clone(), z(e)], vec![z(e), one(e)]]).unwrap();
    let s = conj_lattice(&l).unwrap();
    // both spans contain and are contained in the standard lattice
    assert!(s.contains(&o2) && o2.contains(&s));
    assert_eq!(s, o2);
    let l = canonicalize(&[vec![w.clone(), t(e, 1)], vec![el(e, &[(-1, 1)]), t(e, 2)]]).unwrap();
    assert_eq!(conj_lattice(&conj_lattice(&l).unwrap()).unwrap(), l);
    assert!(conj_lattice(&LatticeBasis::standard(gf(3, 1), 1)).is_err());
}

#[test]
fn containment_examples() {
    let g = gf(2, 1);
    let o2 = LatticeBasis::standard(g, 2);
    let t2 = o2.scale_t(1);
    assert!(contains(&o2, &t2));
    assert!(!contains(&t2, &o2));
    assert!(contains(&t2, &t2));
}

#[test]
fn floor_and_ceiling() {
    let g = gf(3, 1);
    let l = canonicalize(&[vec![t(g, -2), z(g)], vec![t(g, -5), t(g, 3)]]).unwrap();
    assert!(l.contains(&LatticeBasis::standard(g, 2).scale_t(l.floor())));
    assert!(!l.contains(&LatticeBasis::standard(g, 2).scale_t(l.floor() - 1)));
    assert!(LatticeBasis::standard(g, 2)
        .scale_t(l.ceiling())
        .contains(&l));
}

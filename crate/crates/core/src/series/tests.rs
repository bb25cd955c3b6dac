use super::*;
use proptest::prelude::*;

const G: Grading = Grading::Total;

fn t() -> Series {
    Series::t_pow2(G, 2)
}

fn tk(k: u16) -> Series {
    Series::face(G, k)
}

fn at(s: Series, n: i64) -> Series {
    s.truncate(Order::integer(n))
}

/// R = t + 3·t4·t² + 18·t4²·t³ with only t4 active, known through grade 5.
fn bip_r_t4() -> Series {
    let m = |t2, e| Monomial::new(t2, [(4, e)]);
    Series::from_terms(G, Order::integer(5), [(m(2, 0), q(1)), (m(4, 1), q(3)), (m(6, 2), q(18))])
}

#[test]
fn additive_inverse_and_collection() {
    assert!((t() + (-t())).is_zero());
    let a = t() + tk(2);
    let b = a + tk(2);
    assert_eq!(b, Series::from_terms(G, Order::EXACT, [(Monomial::t_pow2(2), q(1)), (Monomial::face(2, 1), q(2))]));
}

#[test]
fn products() {
    assert_eq!(t() * t(), Series::t_pow2(G, 4));
    let s = t() + tk(2);
    let sq = &s * &s;
    let expect = Series::from_terms(
        G,
        Order::EXACT,
        [
            (Monomial::t_pow2(4), q(1)),
            (Monomial::new(2, [(2, 1)]), q(2)),
            (Monomial::face(2, 2), q(1)),
        ],
    );
    assert_eq!(sq, expect);
}

#[test]
fn truncated_product_keeps_only_known_grades() {
    let a = at(t() + Series::t_pow2(G, 4), 2);
    let p = &a * &a;
    // Each factor starts at grade 1, so the product is known one grade further.
    assert_eq!(p.order(), Order::integer(3));
    assert_eq!(p.truncate(Order::integer(2)).terms().collect::<Vec<_>>(), vec![(&Monomial::t_pow2(4), &q(1))]);
    assert!(p.terms().all(|(m, _)| m.grade2(G) <= 6));
    assert_eq!(p.coefficient(&Monomial::t_pow2(6)).unwrap(), q(2));
    assert!(p.coefficient(&Monomial::t_pow2(8)).is_err());
}

#[test]
fn geometric_inverse() {
    let one_minus_t = at(Series::one(G, Order::EXACT) - t(), 6);
    let inv = one_minus_t.invert().unwrap();
    assert_eq!(inv.order(), Order::integer(6));
    for k in 0..=6 {
        assert_eq!(inv.coefficient(&Monomial::t_pow2(2 * k)).unwrap(), q(1));
    }
    assert_eq!(Series::one(G, Order::EXACT).invert().unwrap(), Series::one(G, Order::EXACT));
    let u = at(Series::one(G, Order::EXACT) + (tk(4) * t()).scale_int(3), 6);
    let prod = &u * &u.invert().unwrap();
    assert!(prod.agrees_with(&Series::one(G, Order::integer(6))));
    assert_eq!(prod.order(), Order::integer(6));
}

#[test]
fn invert_needs_constant_term() {
    assert_eq!(at(t(), 4).invert(), Err(Error::ZeroConstantTerm));
    assert_eq!(Series::zero(G, Order::integer(3)).invert(), Err(Error::ZeroConstantTerm));
}

#[test]
fn recip_allows_laurent() {
    let a = at(t() + Series::t_pow2(G, 4), 5);
    let r = a.recip().unwrap();
    assert_eq!(r.coefficient(&Monomial::t_pow2(-2)).unwrap(), q(1));
    assert_eq!(r.coefficient(&Monomial::one()).unwrap(), q(-1));
    assert!(!r.is_power_series());
    let back = &a * &r;
    assert!(back.agrees_with(&Series::one(G, Order::integer(3))));
}

#[test]
fn square_roots() {
    assert_eq!(Series::t_pow2(G, 4).truncate(Order::integer(3)).sqrt().unwrap().coefficient(&Monomial::t_pow2(2)).unwrap(), q(1));
    let half = at(t(), 3).sqrt().unwrap();
    assert_eq!(half.terms().next().unwrap().0.t2(), 1);
    assert_eq!(half.len(), 1);

    let r = bip_r_t4();
    let s = r.sqrt().unwrap();
    let m = |t2, e| Monomial::new(t2, [(4, e)]);
    assert_eq!(s.coefficient(&m(1, 0)).unwrap(), q(1));
    assert_eq!(s.coefficient(&m(3, 1)).unwrap(), qf(3, 2));
    assert_eq!(s.coefficient(&m(5, 2)).unwrap(), qf(63, 8));
    assert!((&s * &s).agrees_with(&r));
}

#[test]
fn sqrt_failures() {
    let two_t = at(t().scale_int(2), 4);
    assert_eq!(two_t.sqrt(), Err(Error::NotASquare));
    assert_eq!(Series::zero(G, Order::integer(2)).sqrt(), Err(Error::NotASquare));
    // Leading part t + t2 is not a single monomial.
    assert_eq!(at(t() + tk(2), 3).sqrt(), Err(Error::NotASquare));
}

#[test]
fn exact_unit_with_tail_is_unbounded() {
    let u = Series::one(G, Order::EXACT) + t();
    assert_eq!(u.invert(), Err(Error::UnboundedExpansion));
}

#[test]
fn derivatives() {
    let t3 = Series::t_pow2(G, 6);
    assert_eq!(t3.derive_t(), Series::t_pow2(G, 4).scale_int(3));
    assert_eq!((tk(2) * t()).derive_t(), tk(2));
    assert_eq!((tk(2) * tk(2)).derive_face(2), tk(2).scale_int(2));
    assert!((t() * tk(2)).derive_face(4).is_zero());

    let r = bip_r_t4();
    let d = r.derive_t();
    assert_eq!(d.order(), Order::integer(4));
    let m = |t2, e| Monomial::new(t2, [(4, e)]);
    assert_eq!(d.coefficient(&m(0, 0)).unwrap(), q(1));
    assert_eq!(d.coefficient(&m(2, 1)).unwrap(), q(6));
    assert_eq!(d.coefficient(&m(4, 2)).unwrap(), q(54));

    assert_eq!(Series::t_pow2(G, 1).derive_t_integral(), Err(Error::HalfIntegerDifferentiation));
    assert_eq!(Series::t_pow2(G, 1).derive_t(), Series::t_pow2(G, -1).scale(&qf(1, 2)));
}

#[test]
fn face_derivative_of_linear_fixed_point() {
    // R = t + t2·R solved by iteration, compared with t/(1 - t2) differentiated by hand.
    let n = 6;
    let mut r = at(t(), n);
    for _ in 0..=n {
        r = at(t() + tk(2) * &r, n);
    }
    let d = r.derive_face(2);
    let one_minus = at(Series::one(G, Order::EXACT) - tk(2), n);
    let expect = t() * one_minus.invert().unwrap().pow_u(2);
    assert!(d.agrees_with(&expect));
    assert_eq!(d.order(), Order::integer(n - 1));
}

#[test]
fn coefficient_lookup() {
    let s = t() + (tk(4) * t() * t()).scale_int(3);
    assert_eq!(s.coefficient(&Monomial::new(4, [(4, 1)])).unwrap(), q(3));
    assert_eq!(Series::zero(G, Order::integer(3)).coefficient(&Monomial::t_pow2(2)).unwrap(), q(0));
    assert_eq!(bip_r_t4().coefficient(&Monomial::t_pow2(2)).unwrap(), q(1));
    assert_eq!(
        at(t(), 1).coefficient(&Monomial::t_pow2(4)),
        Err(Error::BeyondTruncation { grade2: 4, order2: 2 })
    );
}

#[test]
fn faces_grading_ignores_t() {
    let g = Grading::Faces;
    let u = Series::one(g, Order::EXACT) - Series::t_pow2(g, 2);
    // 1 - t has a two-term leading part under this grading.
    assert_eq!(u.truncate(Order::integer(2)).invert(), Err(Error::NotInvertible));
    let v = (Series::one(g, Order::EXACT) - Series::face(g, 2)).truncate(Order::integer(3));
    let w = v.invert().unwrap();
    assert_eq!(w.coefficient(&Monomial::face(2, 3)).unwrap(), q(1));
    assert_eq!(w.derive_t().order(), Order::integer(3));
}

#[test]
fn logarithm() {
    let u = at(Series::one(G, Order::EXACT) + t(), 5);
    let l = u.ln().unwrap();
    assert_eq!(l.ln_t(), &q(0));
    assert_eq!(l.series().coefficient(&Monomial::t_pow2(6)).unwrap(), qf(1, 3));
    // d/dt ln(1+t) = 1/(1+t)
    assert!(l.derive_t().agrees_with(&u.invert().unwrap()));

    let r = bip_r_t4();
    let lr = r.ln().unwrap();
    assert_eq!(lr.ln_t(), &q(1));
    assert!(lr.clone().into_series().is_err());
    assert!(lr.derive_t().agrees_with(&r.derive_t().div(&r).unwrap()));
    assert!(at(t().scale_int(2), 3).ln().is_err());
}

#[test]
fn json_shape() {
    let s = bip_r_t4();
    let j = s.to_json();
    assert_eq!(
        j,
        r#"{"order":"10/2","terms":[{"t2":2,"faces":{},"num":"1","den":"1"},{"t2":4,"faces":{"4":1},"num":"3","den":"1"},{"t2":6,"faces":{"4":2},"num":"18","den":"1"}]}"#
    );
    assert_eq!(Series::from_json(&j).unwrap(), s);
    let f = Series::face(Grading::Faces, 10) + Series::face(Grading::Faces, 2).scale(&qf(-1, 3));
    let jf = f.to_json();
    assert!(jf.contains(r#""faces":{"2":1}"#));
    assert!(jf.contains(r#""grading":"faces""#));
    assert_eq!(Series::from_json(&jf).unwrap(), f);
    assert!(Series::from_json(r#"{"order":"1/2","terms":[{"t2":4,"faces":{},"num":"1","den":"1"}]}"#).is_err());
    assert!(Series::from_json(r#"{"order":"x","terms":[]}"#).is_err());
}

#[test]
fn order_parsing() {
    assert_eq!(Order::parse("3"), Some(Order::integer(3)));
    assert_eq!(Order::parse("7/2"), Some(Order::from_doubled(7)));
    assert_eq!(Order::parse("exact"), Some(Order::EXACT));
    assert_eq!(Order::parse("1/3"), None);
    assert_eq!(Order::from_doubled(-3).to_string(), "-3/2");
}

fn arb_series(grading: Grading) -> impl Strategy<Value = Series> {
    let term = (0i32..4, prop::collection::vec((1u16..4, 1u16..3), 0..2), -5i64..6, 1i64..4);
    (prop::collection::vec(term, 0..6), 3i64..6).prop_map(move |(ts, n)| {
        Series::from_terms(
            grading,
            Order::integer(n),
            ts.into_iter().map(|(t, f, a, b)| (Monomial::new(2 * t, f), qf(a, b))),
        )
    })
}

fn arb_unit() -> impl Strategy<Value = Series> {
    (arb_series(G), 1i64..5, 1i64..4).prop_map(|(s, a, b)| {
        let c = Series::constant(G, Order::EXACT, qf(a, b));
        let tail = s.sub_ref(&Series::constant(G, Order::EXACT, s.constant_term()));
        c + tail
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(a in arb_series(G), b in arb_series(G), c in arb_series(G)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!(((&a * &b) * &c).agrees_with(&(&a * (&b * &c))));
        prop_assert!((&a * (&b + &c)).agrees_with(&(&a * &b + &a * &c)));
        prop_assert!(((&a + &b) + &c).agrees_with(&(&a + (&b + &c))));
    }

    #[test]
    fn invert_is_inverse(u in arb_unit()) {
        let v = u.invert().unwrap();
        let p = &u * &v;
        prop_assert_eq!(p.order(), u.order());
        prop_assert!(p.agrees_with(&Series::one(G, u.order())));
    }

    #[test]
    fn sqrt_squares_back(u in arb_unit(), k in 0i32..3) {
        let a = (&u * &u).mul_t_pow2(2 * k);
        let r = a.sqrt().unwrap();
        let back = &r * &r;
        prop_assert_eq!(back.order(), a.order());
        prop_assert!(back.agrees_with(&a));
    }

    #[test]
    fn leibniz(a in arb_series(G), b in arb_series(G)) {
        let lhs = (&a * &b).derive_t();
        let rhs = &a.derive_t() * &b + &a * &b.derive_t();
        prop_assert!(lhs.agrees_with(&rhs));
        let lf = (&a * &b).derive_face(2);
        let rf = &a.derive_face(2) * &b + &a * &b.derive_face(2);
        prop_assert!(lf.agrees_with(&rf));
    }

    #[test]
    fn json_round_trip(a in arb_series(G), b in arb_series(Grading::Faces)) {
        prop_assert_eq!(Series::from_json(&a.to_json()).unwrap(), a.clone());
        prop_assert_eq!(Series::from_json(&b.to_json()).unwrap().to_json(), b.to_json());
    }

    #[test]
    fn pow_q_composes(u in arb_unit()) {
        let sq = u.pow_q(&qf(1, 2));
        if let Ok(r) = sq {
            prop_assert!(r.pow_u(2).agrees_with(&u));
        }
        let third = u.pow_i(3).unwrap();
        prop_assert!(third.agrees_with(&(&u * &u * &u)));
        let inv2 = u.pow_i(-2).unwrap();
        prop_assert!((&inv2 * &u.pow_u(2)).agrees_with(&Series::one(G, u.order())));
    }
}

use super::*;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn kp(n: u32) -> SeriesRing {
    SeriesRing::new(VarKind::All, n).unwrap()
}

fn x(ring: &SeriesRing, n: usize) -> GradedSeries {
    GradedSeries::x(ring, n).unwrap()
}

fn poly(ring: &SeriesRing, terms: &[(Monomial, Rational)]) -> GradedSeries {
    GradedSeries::from_terms(ring, terms.iter().cloned()).unwrap()
}

#[test]
fn add_doubles() {
    let ring = kp(3);
    let s = &x(&ring, 1) + &x(&ring, 1);
    assert_eq!(s, poly(&ring, &[(Monomial::x(1), r(2, 1))]));
}

#[test]
fn exp_taylor() {
    let ring = kp(3);
    let e = x(&ring, 1).exp().unwrap();
    let expected = poly(
        &ring,
        &[
            (Monomial::one(), r(1, 1)),
            (Monomial::x(1), r(1, 1)),
            (Monomial::x_pow(1, 2), r(1, 2)),
            (Monomial::x_pow(1, 3), r(1, 6)),
        ],
    );
    assert_eq!(e, expected);
    assert_eq!(
        GradedSeries::one(&ring).exp(),
        Err(SeriesError::ExpConstantTerm)
    );
}

#[test]
fn inv_geometric() {
    let ring = kp(2);
    let a = &GradedSeries::one(&ring) + &x(&ring, 1);
    let expected = poly(
        &ring,
        &[
            (Monomial::one(), r(1, 1)),
            (Monomial::x(1), r(-1, 1)),
            (Monomial::x_pow(1, 2), r(1, 1)),
        ],
    );
    assert_eq!(a.inv().unwrap(), expected);
    assert_eq!(x(&ring, 1).inv(), Err(SeriesError::InvConstantTerm));
}

#[test]
fn mismatched_rings_are_rejected() {
    let a = x(&kp(3), 1);
    let b = x(&kp(4), 1);
    assert!(matches!(
        a.checked_add(&b),
        Err(SeriesError::RingMismatch(..))
    ));
    let odd = SeriesRing::new(VarKind::Odd, 3).unwrap();
    assert!(matches!(
        a.checked_mul(&x(&odd, 1)),
        Err(SeriesError::RingMismatch(..))
    ));
    assert_eq!(GradedSeries::x(&odd, 2), Err(SeriesError::EvenVariable(2)));
}

#[test]
fn miwa_shift_examples() {
    let ring = SeriesRing::with_params(VarKind::All, &["a"], 4).unwrap();
    let a = GradedSeries::param(&ring, 0);
    let one = Rational::one();
    assert_eq!(x(&ring, 1).miwa_shift(0, &one, 1), &x(&ring, 1) + &a);
    assert_eq!(
        x(&ring, 2).miwa_shift(0, &one, 1),
        &x(&ring, 2) + &a.pow(2).scale(&r(1, 2))
    );
    let odd = SeriesRing::with_params(VarKind::Odd, &["a"], 4).unwrap();
    let a = GradedSeries::param(&odd, 0);
    assert_eq!(
        x(&odd, 3).miwa_shift(0, &r(2, 1), 1),
        &x(&odd, 3) + &a.pow(3).scale(&r(2, 3))
    );
}

#[test]
fn numeric_shift_is_substitution() {
    let ring = kp(6);
    let f = &x(&ring, 1).pow(2) + &x(&ring, 2);
    let g = f.miwa_shift_value(&r(2, 1), &Rational::one(), -1);
    // (x1 - 2)^2 + (x2 - 2)
    let expected = poly(
        &ring,
        &[
            (Monomial::one(), r(2, 1)),
            (Monomial::x(1), r(-4, 1)),
            (Monomial::x(2), r(1, 1)),
            (Monomial::x_pow(1, 2), r(1, 1)),
        ],
    );
    assert_eq!(g, expected);
}

#[test]
fn diff_operator_examples() {
    let ring = kp(4);
    let d = GradedSeries::apply_diff_operator(&x(&ring, 1), &x(&ring, 1).pow(2)).unwrap();
    assert_eq!(d.terms(), &[(Monomial::x(1), r(2, 1))]);
    assert_eq!(d.truncation(), 3);
    let d = GradedSeries::apply_diff_operator(&x(&ring, 2), &x(&ring, 2)).unwrap();
    assert_eq!(d.constant_term(), r(1, 2));
    assert_eq!(
        GradedSeries::pair_at_zero(&x(&ring, 2), &x(&ring, 2)).unwrap(),
        r(1, 2)
    );
    let pr = SeriesRing::with_params(VarKind::All, &["a"], 4).unwrap();
    assert_eq!(
        GradedSeries::apply_diff_operator(&GradedSeries::param(&pr, 0), &x(&pr, 1)),
        Err(SeriesError::OperatorHasParams)
    );
}

#[test]
fn split_and_embed() {
    let ring = SeriesRing::with_params(VarKind::All, &["a", "b"], 5).unwrap();
    let f = x(&ring, 2).miwa_shift(1, &Rational::one(), 1);
    let parts = f.split_by_param(1);
    assert_eq!(parts[&0], x(&ring, 2).truncated(5));
    assert_eq!(parts[&2].constant_term(), r(1, 2));
    assert_eq!(parts[&2].truncation(), 3);
    let wide = SeriesRing::with_params(VarKind::All, &["c", "b", "a"], 5).unwrap();
    let g = GradedSeries::param(&ring, 0).embed(&wide).unwrap();
    assert_eq!(g, GradedSeries::param(&wide, 2));
    assert!(GradedSeries::param(&ring, 0).embed(&kp(5)).is_err());
}

#[test]
fn shift_by_y_and_swap() {
    let ring = kp(4);
    let f = x(&ring, 1).pow(2);
    let g = f.shift_by_y(-1);
    let y1 = GradedSeries::y(&ring, 1).unwrap();
    let expected = (&x(&ring, 1) - &y1).pow(2);
    assert_eq!(g, expected);
    assert_eq!(x(&ring, 3).swap_xy(), GradedSeries::y(&ring, 3).unwrap());
    assert_eq!(g.at_origin().len(), 0);
}

#[test]
fn display_is_readable() {
    let ring = kp(3);
    let f = &x(&ring, 1).pow(3).scale(&r(1, 3)) - &x(&ring, 3);
    assert_eq!(f.to_string(), "-x3 + 1/3*x1^3");
}

// Random series over x1..x4 plus one parameter, truncated at `n`.
fn arb_series(n: u32) -> impl Strategy<Value = GradedSeries> {
    let term = (
        0u32..3,
        0u32..3,
        0u32..2,
        0u32..2,
        0u32..3,
        -6i64..7,
        1i64..5,
    );
    proptest::collection::vec(term, 0..8).prop_map(move |ts| {
        let ring = SeriesRing::with_params(VarKind::All, &["a"], n).unwrap();
        let terms = ts.into_iter().map(|(e1, e2, e3, e4, ea, p, q)| {
            let m = Monomial::x_pow(1, e1)
                .mul(&Monomial::x_pow(2, e2))
                .mul(&Monomial::x_pow(3, e3))
                .mul(&Monomial::x_pow(4, e4))
                .mul(&Monomial::param_pow(0, ea));
            (m, Rational::new(p, q))
        });
        GradedSeries::from_terms(&ring, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_series(8), b in arb_series(8), c in arb_series(8)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn shift_round_trip(a in arb_series(7), c in 1i64..4) {
        let c = Rational::from_integer(c);
        let back = a.miwa_shift(0, &c, 1).miwa_shift(0, &c, -1);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn shifts_commute(a in arb_series(7)) {
        let ring = a.ring().extend_params(&["b"]).unwrap();
        let a = a.embed(&ring).unwrap();
        let one = Rational::one();
        prop_assert_eq!(
            a.miwa_shift(0, &one, 1).miwa_shift(1, &one, -1),
            a.miwa_shift(1, &one, -1).miwa_shift(0, &one, 1)
        );
    }

    #[test]
    fn shift_preserves_homogeneity(a in arb_series(8), w in 0u32..8) {
        let h: Vec<_> = a.terms().iter().filter(|(m, _)| m.weight() == w).cloned().collect();
        let h = GradedSeries::from_terms(a.ring(), h).unwrap();
        let s = h.miwa_shift(0, &Rational::new(3, 2), -1);
        prop_assert!(s.terms().iter().all(|(m, _)| m.weight() == w));
    }

    #[test]
    fn exp_inv_consistency(a in arb_series(6)) {
        let b = &a - &GradedSeries::constant(a.ring(), a.constant_term());
        let e = b.exp().unwrap();
        prop_assert_eq!(&e * &e.inv().unwrap(), GradedSeries::one(a.ring()));
        prop_assert_eq!(&e * &(-&b).exp().unwrap(), GradedSeries::one(a.ring()));
    }
}

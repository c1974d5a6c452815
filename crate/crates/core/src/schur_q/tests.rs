use super::*;
use crate::linalg::pfaffian;
use crate::partitions::partitions_of;
use crate::series::Monomial;
use crate::test_util::solve;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn sp(v: &[u32]) -> StrictPartition {
    StrictPartition::new(v.to_vec()).unwrap()
}

fn poly(n: u32, terms: &[(Monomial, Rational)]) -> GradedSeries {
    GradedSeries::from_terms(&odd_ring(n), terms.iter().cloned()).unwrap()
}

fn nonzero_entries(t: &QTable) -> BTreeMap<StrictPartition, Rational> {
    t.nonzero().map(|(k, v)| (k.clone(), v.clone())).collect()
}

/// Oracle: solves `τ = Σ ξ_λ Q_λ(x/2)` weight by weight in the basis of odd
/// monomials (indexed by partitions into odd parts).
fn linear_solve_expansion(tau: &GradedSeries) -> BTreeMap<StrictPartition, Rational> {
    let half = r(1, 2);
    let mut out = BTreeMap::new();
    for w in 0..=tau.truncation() {
        let lams: Vec<StrictPartition> = crate::partitions::strict_partitions_of(w);
        let monos: Vec<Monomial> = partitions_of(w)
            .into_iter()
            .filter(|mu| mu.parts().iter().all(|p| p % 2 == 1))
            .map(|mu| {
                mu.parts()
                    .iter()
                    .fold(Monomial::one(), |m, &p| m.mul(&Monomial::x(p as usize)))
            })
            .collect();
        assert_eq!(monos.len(), lams.len());
        let qs: Vec<GradedSeries> = lams
            .iter()
            .map(|l| q_schur_poly(l).scale_x(&half))
            .collect();
        let a = monos
            .iter()
            .map(|m| qs.iter().map(|q| q.coeff(m)).collect())
            .collect();
        let b = monos.iter().map(|m| tau.coeff(m)).collect();
        for (lam, v) in lams.into_iter().zip(solve(a, b)) {
            if !v.is_zero() {
                out.insert(lam, v);
            }
        }
    }
    out
}

#[test]
fn q_examples() {
    assert_eq!(q_poly(0), GradedSeries::one(&odd_ring(0)));
    assert_eq!(q_poly(1), poly(1, &[(Monomial::x(1), r(2, 1))]));
    assert_eq!(
        q_poly(3),
        poly(
            3,
            &[(Monomial::x(3), r(2, 1)), (Monomial::x_pow(1, 3), r(4, 3))]
        )
    );
    assert!(q_poly(-1).is_zero());
}

#[test]
fn two_row_examples() {
    assert_eq!(q_two_row(1, 0), q_poly(1));
    let q21 = poly(
        3,
        &[(Monomial::x(3), r(-4, 1)), (Monomial::x_pow(1, 3), r(4, 3))],
    );
    assert_eq!(q_two_row(2, 1), q21);
    assert_eq!(q_two_row(0, 1), -&q_poly(1));
    assert!(q_two_row(0, 0).is_zero());
    assert!(q_two_row(3, 3).is_zero());
    assert!(q_two_row(2, -1).is_zero());
}

#[test]
fn q_schur_examples() {
    assert_eq!(
        q_schur_poly(&StrictPartition::empty()),
        GradedSeries::one(&odd_ring(0))
    );
    assert_eq!(q_schur_poly(&sp(&[1])), q_poly(1));
    assert_eq!(q_schur_poly(&sp(&[3])), q_poly(3));
    assert_eq!(q_schur_poly(&sp(&[2, 1])), q_two_row(2, 1));
    let ring = odd_ring(6);
    let q = |a, b| q_two_row(a, b).embed(&ring).unwrap();
    let expected = &(&(&q(3, 2) * &q(1, 0)) - &(&q(3, 1) * &q(2, 0))) + &(&q(3, 0) * &q(2, 1));
    assert_eq!(q_schur_poly(&sp(&[3, 2, 1])), expected);
}

#[test]
fn extended_examples() {
    assert_eq!(q_extended(&[1, 2]), -&q_two_row(2, 1));
    assert!(q_extended(&[2, 2]).is_zero());
    assert!(q_extended(&[3, -1]).is_zero());
    assert!(q_extended(&[0, 0]).is_zero());
    assert_eq!(q_extended(&[2, 0]), q_poly(2));
}

#[test]
fn homogeneity_and_even_length_pfaffians() {
    let basis = QBasis::new(8);
    for (lam, q) in basis.iter() {
        assert!(
            q.terms().iter().all(|(m, _)| m.weight() == lam.weight()),
            "{lam}"
        );
        if lam.len() % 2 == 0 && !lam.is_empty() {
            let ring = odd_ring(lam.weight());
            let rows = lam.parts();
            let m: Vec<Vec<GradedSeries>> = rows
                .iter()
                .map(|&a| {
                    rows.iter()
                        .map(|&b| q_two_row(a as i64, b as i64).embed(&ring).unwrap())
                        .collect()
                })
                .collect();
            assert_eq!(
                pfaffian(&m, &GradedSeries::one(&ring)).unwrap(),
                *q,
                "{lam}"
            );
        }
    }
}

#[test]
fn expansion_examples() {
    let tau = q_two_row(2, 1).scale_x(&r(1, 2));
    let t = expand_q(&tau).unwrap();
    let expected: BTreeMap<_, _> = [(sp(&[2, 1]), Rational::one())].into();
    assert_eq!(nonzero_entries(&t), expected);
    assert_eq!(linear_solve_expansion(&tau), expected);

    let t = expand_q(&GradedSeries::one(&odd_ring(5))).unwrap();
    assert_eq!(
        nonzero_entries(&t),
        [(StrictPartition::empty(), Rational::one())].into()
    );

    let e = GradedSeries::x(&odd_ring(2), 1).unwrap().exp().unwrap();
    let t = expand_q(&e).unwrap();
    let expected: BTreeMap<_, _> = [
        (StrictPartition::empty(), r(1, 1)),
        (sp(&[1]), r(1, 1)),
        (sp(&[2]), r(1, 1)),
    ]
    .into();
    assert_eq!(nonzero_entries(&t), expected);
    assert_eq!(linear_solve_expansion(&e), expected);
}

#[test]
fn expansion_rejects_bad_input() {
    let kp = SeriesRing::new(VarKind::All, 3).unwrap();
    assert!(matches!(
        expand_q(&GradedSeries::one(&kp)),
        Err(ExpandError::WrongKind(_))
    ));
    let ring = SeriesRing::with_params(VarKind::Odd, &["a"], 3).unwrap();
    assert_eq!(
        expand_q(&GradedSeries::param(&ring, 0)),
        Err(ExpandError::HasParams)
    );
}

#[test]
fn cauchy_identity() {
    assert!(q_cauchy_check(4).pass);
    let rep = q_cauchy_check(8);
    assert!(rep.pass, "{rep}");
    let bad = q_cauchy_check_variant(4, QCauchyVariant::NoHalfPowers);
    assert!(!bad.pass);
    let w = bad.first_failure().unwrap();
    assert_eq!(w.weight, Some(2));
    assert_eq!(w.monomial, "x1*y1");
}

#[test]
fn lemma2_examples() {
    let r1 = lemma2_check(1, 6);
    assert!(r1.pass, "{r1}");
    let r2 = lemma2_check(2, 6);
    assert!(r2.pass, "{r2}");
    let bad = lemma2_check_variant(1, 6, Lemma2Variant::FullArgument);
    assert!(!bad.pass);
}

fn arb_odd_poly(n: u32) -> impl Strategy<Value = GradedSeries> {
    let term = (
        proptest::collection::vec(prop_oneof![Just(1usize), Just(3), Just(5)], 0..4),
        -5i64..6,
        1i64..4,
    );
    proptest::collection::vec(term, 0..6).prop_map(move |ts| {
        let terms = ts.into_iter().map(|(vars, a, b)| {
            let m = vars
                .iter()
                .fold(Monomial::one(), |m, &v| m.mul(&Monomial::x(v)));
            (m, Rational::new(a, b))
        });
        GradedSeries::from_terms(&odd_ring(n), terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn expansion_matches_linear_solve(tau in arb_odd_poly(8)) {
        let t = expand_q(&tau).unwrap();
        prop_assert_eq!(nonzero_entries(&t), linear_solve_expansion(&tau));
    }

    #[test]
    fn resum_expand_round_trip(tau in arb_odd_poly(8)) {
        let t = expand_q(&tau).unwrap();
        prop_assert_eq!(resum_q(&t, 8), tau);
    }

    #[test]
    fn expand_resum_round_trip(vals in proptest::collection::vec(-4i64..5, 18)) {
        let mut table = QTable::new(8);
        for (lam, v) in enumerate_strict(8).into_iter().zip(vals) {
            table.set(lam, Rational::from_integer(v));
        }
        let back = expand_q(&resum_q(&table, 8)).unwrap();
        prop_assert_eq!(nonzero_entries(&back), nonzero_entries(&table));
    }
}

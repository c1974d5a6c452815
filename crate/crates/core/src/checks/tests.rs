use super::*;
use crate::partitions::{Partition, StrictPartition};
use crate::schur_kp::schur_poly;
use crate::schur_q::q_schur_poly;

fn kp_ring(n: u32) -> SeriesRing {
    SeriesRing::new(VarKind::All, n).unwrap()
}

fn odd_ring(n: u32) -> SeriesRing {
    SeriesRing::new(VarKind::Odd, n).unwrap()
}

fn chi(parts: &[u32], n: u32) -> GradedSeries {
    schur_poly(&Partition::new(parts.to_vec()).unwrap())
        .widen_truncation(n)
        .unwrap()
}

/// `Q_λ(x/2)` at truncation `n`.
fn qhalf(parts: &[u32], n: u32) -> GradedSeries {
    q_schur_poly(&StrictPartition::new(parts.to_vec()).unwrap())
        .scale_x(&Rational::new(1, 2))
        .widen_truncation(n)
        .unwrap()
}

fn one_plus(s: GradedSeries) -> GradedSeries {
    &GradedSeries::one(s.ring()) + &s
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

use CheckMode::{Exact, Graded};

#[test]
fn three_term_examples() {
    let one = GradedSeries::one(&kp_ring(6));
    assert!(kp_three_term_check(&one, Graded, &opts()).unwrap().pass);
    assert!(kp_three_term_check(&one, Exact, &opts()).unwrap().pass);
    assert!(
        kp_three_term_check(&chi(&[2, 1], 3), Exact, &opts())
            .unwrap()
            .pass
    );
    assert!(
        kp_three_term_check(&chi(&[2, 1], 6), Graded, &opts())
            .unwrap()
            .pass
    );
    let bad = kp_three_term_check(&one_plus(chi(&[2, 2], 6)), Graded, &opts()).unwrap();
    assert!(!bad.pass);
    assert!(bad.first_failure().unwrap().weight.unwrap() <= 6);
    assert_eq!(bad.guaranteed_weight, Some(6));
    assert!(
        !kp_three_term_check(&one_plus(chi(&[2, 2], 4)), Exact, &opts())
            .unwrap()
            .pass
    );
}

#[test]
fn hirota_examples() {
    let one = GradedSeries::one(&kp_ring(6));
    let rep = kp_hirota_check(&one).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.guaranteed_weight, Some(5));
    assert!(kp_hirota_check(&chi(&[1], 6)).unwrap().pass);
    assert!(kp_hirota_check(&chi(&[2, 1], 6)).unwrap().pass);
    assert!(!kp_hirota_check(&one_plus(chi(&[2, 2], 6))).unwrap().pass);
    let e = GradedSeries::x(&kp_ring(6), 1).unwrap().exp().unwrap();
    assert!(kp_hirota_check(&e).unwrap().pass);
}

#[test]
fn determinant_examples() {
    let one = GradedSeries::one(&kp_ring(5));
    assert!(
        kp_determinant_formula_check(&one, 2, Graded, &opts())
            .unwrap()
            .pass
    );
    assert!(
        kp_determinant_formula_check(&chi(&[2, 1], 3), 2, Exact, &opts())
            .unwrap()
            .pass
    );
    assert!(
        kp_determinant_formula_check(&chi(&[2, 1], 3), 3, Exact, &opts())
            .unwrap()
            .pass
    );
    let bad = kp_determinant_formula_check(&one_plus(chi(&[2, 2], 6)), 2, Graded, &opts()).unwrap();
    assert!(!bad.pass);
    assert_eq!(
        kp_determinant_formula_check(&one, 7, Graded, &opts()),
        Err(CheckError::UnsupportedOrder(7, "KP determinant-formula"))
    );
}

#[test]
fn addition_examples() {
    assert!(
        kp_addition_formula_check(&chi(&[3, 1], 4), 3, Exact, &opts())
            .unwrap()
            .pass
    );
    assert!(
        !kp_addition_formula_check(&one_plus(chi(&[2, 2], 4)), 3, Exact, &opts())
            .unwrap()
            .pass
    );
    assert!(
        kp_addition_formula_check(&chi(&[2, 1], 5), 2, Graded, &opts())
            .unwrap()
            .pass
    );
}

#[test]
fn four_term_examples() {
    let one = GradedSeries::one(&odd_ring(6));
    assert!(bkp_four_term_check(&one, Graded, &opts()).unwrap().pass);
    assert!(bkp_four_term_check(&one, Exact, &opts()).unwrap().pass);
    let e = GradedSeries::x(&odd_ring(6), 1).unwrap().exp().unwrap();
    assert!(bkp_four_term_check(&e, Graded, &opts()).unwrap().pass);
    assert!(bkp_hirota_check(&e).unwrap().pass);
    assert!(
        bkp_four_term_check(&qhalf(&[2, 1], 3), Exact, &opts())
            .unwrap()
            .pass
    );
    let bad = one_plus(qhalf(&[3, 2, 1], 6));
    assert!(!bkp_four_term_check(&bad, Exact, &opts()).unwrap().pass);
    // Weight-3 prefactor plus |λ| = 6: first visible at weight 9.
    assert!(bkp_four_term_check(&bad, Graded, &opts()).unwrap().pass);
    let bad9 = one_plus(qhalf(&[3, 2, 1], 9));
    assert!(!bkp_four_term_check(&bad9, Graded, &opts()).unwrap().pass);
}

#[test]
fn bkp_hirota_examples() {
    assert!(
        bkp_hirota_check(&GradedSeries::one(&odd_ring(6)))
            .unwrap()
            .pass
    );
    assert!(bkp_hirota_check(&qhalf(&[2, 1], 8)).unwrap().pass);
    assert!(
        !bkp_hirota_check(&one_plus(qhalf(&[3, 2, 1], 8)))
            .unwrap()
            .pass
    );
}

#[test]
fn pfaffian_addition_examples() {
    let tau = qhalf(&[3, 1], 4);
    assert!(
        bkp_pfaffian_addition_check(&tau, 4, Exact, &opts())
            .unwrap()
            .pass
    );
    assert!(
        bkp_pfaffian_addition_check(&tau, 3, Exact, &opts())
            .unwrap()
            .pass
    );
    let bad = one_plus(qhalf(&[3, 2, 1], 6));
    assert!(
        !bkp_pfaffian_addition_check(&bad, 4, Exact, &opts())
            .unwrap()
            .pass
    );
    assert!(
        !bkp_pfaffian_addition_check(&bad, 3, Exact, &opts())
            .unwrap()
            .pass
    );
}

#[test]
fn wrong_kind_and_params_are_rejected() {
    let kp = GradedSeries::one(&kp_ring(3));
    assert!(matches!(
        bkp_hirota_check(&kp),
        Err(CheckError::WrongKind(..))
    ));
    let pr = SeriesRing::with_params(VarKind::All, &["a"], 3).unwrap();
    assert_eq!(
        kp_three_term_check(&GradedSeries::param(&pr, 0), Graded, &opts()),
        Err(CheckError::HasParams)
    );
}

#[test]
fn exact_reports_are_deterministic() {
    let tau = one_plus(chi(&[2, 2], 4));
    let a = kp_three_term_check(&tau, Exact, &opts()).unwrap();
    let b = kp_three_term_check(&tau, Exact, &opts()).unwrap();
    assert_eq!(a, b);
    let Parameters::Samples(s) = &a.parameters else {
        panic!("exact mode records samples");
    };
    assert_eq!(s.len(), DEFAULT_SAMPLES);
    for tuple in s {
        let v: Vec<Rational> = tuple.iter().map(|(_, v)| v.clone()).collect();
        assert!(distinct(&v));
        assert!(v
            .iter()
            .all(|x| x.numer().magnitude() <= &13u32.into() && x.denom() <= 13.into()));
    }
    let other = CheckOptions { seed: 1, ..opts() };
    assert_ne!(
        kp_three_term_check(&tau, Exact, &other).unwrap().parameters,
        a.parameters
    );
}

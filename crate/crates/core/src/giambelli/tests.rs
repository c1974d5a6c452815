use super::*;
use crate::schur_kp::expand_schur;
use crate::schur_q::expand_q;
use crate::series::SeriesRing;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn sp(v: &[u32]) -> StrictPartition {
    StrictPartition::new(v.to_vec()).unwrap()
}

fn exp_x1(kind: VarKind, n: u32) -> GradedSeries {
    let ring = SeriesRing::new(kind, n).unwrap();
    GradedSeries::x(&ring, 1).unwrap().exp().unwrap()
}

#[test]
fn kp_synthesis_examples() {
    let (_, tau) = giambelli_synthesize_kp(&KpHookSeed::new(), 5);
    assert_eq!(tau, GradedSeries::one(tau.ring()));

    let mut seed = KpHookSeed::new();
    seed.insert(0, 0, Rational::one());
    let (_, tau) = giambelli_synthesize_kp(&seed, 6);
    let ring = tau.ring().clone();
    assert_eq!(
        tau,
        &GradedSeries::one(&ring) + &GradedSeries::x(&ring, 1).unwrap()
    );
}

#[test]
fn kp_synthesis_reproduces_exp_x1() {
    // Hook coefficients of e^{x1}: binom(k+l, l)/(k+l+1)!.
    let mut seed = KpHookSeed::new();
    for k in 0..=3u32 {
        for l in 0..=3u32 {
            let v = Rational::binomial(k + l, l) / Rational::factorial(k + l + 1);
            seed.insert(k, l, v);
        }
    }
    let (table, _) = giambelli_synthesize_kp(&seed, 4);
    assert_eq!(table.get(&p(&[2, 2])), r(1, 12));
    let expected = expand_schur(&exp_x1(VarKind::All, 4)).unwrap();
    assert_eq!(table, expected);
}

#[test]
fn kp_verification_examples() {
    let t = expand_schur(&exp_x1(VarKind::All, 6)).unwrap();
    let rep = giambelli_verify_kp(&t).unwrap();
    assert!(rep.pass, "{rep}");

    let chi22 = crate::schur_kp::schur_poly(&p(&[2, 2]));
    let t = expand_schur(&chi22).unwrap();
    assert_eq!(
        giambelli_verify_kp(&t),
        Err(GiambelliError::Normalization(Rational::zero()))
    );

    let mut t = SchurTable::new(4);
    t.set(Partition::empty(), Rational::one());
    t.set(p(&[2, 2]), Rational::one());
    let rep = giambelli_verify_kp(&t).unwrap();
    assert!(!rep.pass);
    let w = rep.first_failure().unwrap();
    assert_eq!(w.monomial, "(1,0|1,0)");
    assert_eq!(w.residual, Rational::one());
}

#[test]
fn kp_verification_sees_absent_entries() {
    let mut t = SchurTable::new(4);
    t.set(Partition::empty(), Rational::one());
    t.set(p(&[1]), Rational::one());
    t.set(p(&[2, 2]), Rational::zero());
    t.set(Partition::hook(1, 1), Rational::one());
    // ξ_(1,0|1,0) is absent, but det = ξ_(1|1)ξ_(0|0) - ξ_(1|0)ξ_(0|1) = 1.
    let rep = giambelli_verify_kp(&t).unwrap();
    assert!(!rep.pass);
    assert_eq!(rep.first_failure().unwrap().monomial, "(1,0|1,0)");
}

#[test]
fn bkp_synthesis_examples() {
    let (_, tau) = giambelli_synthesize_bkp(&BkpPairSeed::new(), 6);
    assert_eq!(tau, GradedSeries::one(tau.ring()));

    let mut seed = BkpPairSeed::new();
    seed.insert_pair(2, 1, Rational::one()).unwrap();
    let (table, tau) = giambelli_synthesize_bkp(&seed, 8);
    assert_eq!(table.nonzero().count(), 2);
    let q21 = q_schur_poly(&sp(&[2, 1]))
        .scale_x(&r(1, 2))
        .widen_truncation(8)
        .unwrap();
    assert_eq!(tau, &GradedSeries::one(tau.ring()) + &q21);
}

#[test]
fn bkp_synthesis_reproduces_exp_x1() {
    let expected = expand_q(&exp_x1(VarKind::Odd, 6)).unwrap();
    let seed = BkpPairSeed::from_table(&expected);
    let (table, _) = giambelli_synthesize_bkp(&seed, 6);
    let x = |v: &[u32]| expected.get(&sp(v));
    let three =
        &(&(&x(&[3, 2]) * &x(&[1])) - &(&x(&[3, 1]) * &x(&[2]))) + &(&x(&[3]) * &x(&[2, 1]));
    assert_eq!(table.get(&sp(&[3, 2, 1])), three);
    assert_eq!(table.get(&sp(&[3, 2, 1])), expected.get(&sp(&[3, 2, 1])));
    assert_eq!(table, expected);
}

#[test]
fn bkp_verification_examples() {
    let q21 = q_schur_poly(&sp(&[2, 1]))
        .scale_x(&r(1, 2))
        .widen_truncation(8)
        .unwrap();
    let t = expand_q(&(&GradedSeries::one(q21.ring()) + &q21)).unwrap();
    let rep = giambelli_verify_bkp(&t).unwrap();
    assert!(rep.pass, "{rep}");
    assert_eq!(rep.convention.as_deref(), Some(BKP_CONVENTION));

    let mut t = QTable::new(6);
    t.set(StrictPartition::empty(), Rational::one());
    t.set(sp(&[3, 2, 1]), Rational::one());
    let rep = giambelli_verify_bkp(&t).unwrap();
    assert!(!rep.pass);
    assert_eq!(rep.first_failure().unwrap().monomial, "(3,2,1)");

    let t = expand_q(&exp_x1(VarKind::Odd, 6)).unwrap();
    assert!(giambelli_verify_bkp(&t).unwrap().pass);
}

#[test]
fn seed_index_validation() {
    let mut s = BkpPairSeed::new();
    assert_eq!(
        s.insert_pair(1, 2, Rational::one()),
        Err(GiambelliError::PairIndex(1, 2))
    );
    assert_eq!(
        s.insert_pair(2, 0, Rational::one()),
        Err(GiambelliError::PairIndex(2, 0))
    );
    assert_eq!(
        s.insert_single(0, Rational::one()),
        Err(GiambelliError::SingleIndex)
    );
    s.insert_pair(3, 1, r(2, 1)).unwrap();
    assert_eq!(s.entry(1, 3), r(-2, 1));
    assert_eq!(s.entry(3, 3), Rational::zero());
}

#[test]
fn general_x_examples() {
    let rep = giambelli_general_x_kp(&exp_x1(VarKind::All, 6), &p(&[2, 2])).unwrap();
    assert!(rep.pass, "{rep}");
    assert_eq!(rep.guaranteed_weight, Some(2));

    let one = GradedSeries::one(&SeriesRing::new(VarKind::All, 6).unwrap());
    assert!(giambelli_general_x_kp(&one, &p(&[3, 2, 1])).unwrap().pass);

    let chi22 = crate::schur_kp::schur_poly(&p(&[2, 2]))
        .widen_truncation(6)
        .unwrap();
    let bad = &GradedSeries::one(chi22.ring()) + &chi22;
    let rep = giambelli_general_x_kp(&bad, &p(&[2, 2])).unwrap();
    assert!(!rep.pass);
    assert_eq!(rep.first_failure().unwrap().weight, Some(0));

    assert!(
        giambelli_general_x_bkp(&exp_x1(VarKind::Odd, 8), &sp(&[3, 2, 1]))
            .unwrap()
            .pass
    );
    let q321 = q_schur_poly(&sp(&[3, 2, 1]))
        .scale_x(&r(1, 2))
        .widen_truncation(7)
        .unwrap();
    let bad = &GradedSeries::one(q321.ring()) + &q321;
    assert!(!giambelli_general_x_bkp(&bad, &sp(&[3, 2, 1])).unwrap().pass);
    assert_eq!(
        giambelli_general_x_kp(&one, &p(&[4, 3])),
        Err(GiambelliError::TooHeavy(7, 6))
    );
}

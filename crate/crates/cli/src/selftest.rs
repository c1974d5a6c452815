//! The acceptance suite, scaled by a single weight `w` (8 by default).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use taufn::checks::*;
use taufn::giambelli::*;
use taufn::linalg::{det_plucker_residual, determinant, pfaffian, pfaffian_plucker_residual};
use taufn::partitions::{enumerate_partitions, enumerate_strict, Partition, StrictPartition};
use taufn::schur_kp::{
    expand_schur, kp_cauchy_check, lemma1_check, lemma1_check_variant, schur_poly, Lemma1Variant,
};
use taufn::schur_q::{
    expand_q, lemma2_check, lemma2_check_variant, q_cauchy_check, q_schur_poly, Lemma2Variant,
};
use taufn::table::QTable;
use taufn::{CheckMode, CheckReport, GradedSeries, Rational, SeriesRing, VarKind};

/// Smallest and largest supported suite weight.
pub const MIN_WEIGHT: u32 = 6;
pub const MAX_WEIGHT: u32 = 12;

#[derive(Clone, Debug)]
pub struct Config {
    pub max_weight: u32,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_weight: 8,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Counts expectations and keeps a message for each broken one.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// A report that must pass.
    fn pass<E: std::fmt::Display>(&mut self, label: &str, r: Result<CheckReport, E>) {
        match r {
            Ok(r) => self.expect(r.pass, || format!("{label}: {r}")),
            Err(e) => self.expect(false, || format!("{label}: {e}")),
        }
    }

    /// A report that must fail and name a witness.
    fn fail<E: std::fmt::Display>(&mut self, label: &str, r: Result<CheckReport, E>) {
        match r {
            Ok(r) => {
                let named = r.first_failure().is_some_and(|w| !w.monomial.is_empty());
                self.expect(!r.pass && named, || {
                    format!("{label}: expected a failure with a witness, got {r}")
                });
            }
            Err(e) => self.expect(false, || format!("{label}: {e}")),
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

type Criterion = (u8, &'static str, fn(&Config) -> Tally);

const CRITERIA: [Criterion; 8] = [
    (1, "cauchy identities", cauchy),
    (2, "kp tau suite", kp_suite),
    (3, "bkp tau suite", bkp_suite),
    (4, "kp giambelli round trip", kp_round_trip),
    (5, "bkp giambelli round trip", bkp_round_trip),
    (6, "negative controls", negative_controls),
    (7, "lemma suite", lemmas),
    (8, "linear algebra", linear_algebra),
];

pub fn criteria() -> impl Iterator<Item = (u8, &'static str)> {
    CRITERIA.iter().map(|&(id, name, _)| (id, name))
}

/// Runs one criterion by id (1..=8).
pub fn run_criterion(id: u8, cfg: &Config) -> Option<Outcome> {
    let &(id, name, f) = CRITERIA.iter().find(|c| c.0 == id)?;
    let started = Instant::now();
    let t = f(cfg);
    Some(Outcome {
        id,
        name,
        pass: t.failures.is_empty(),
        checks: t.checks,
        failures: t.failures,
        elapsed: started.elapsed(),
    })
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|c| run_criterion(c.0, cfg).expect("listed criterion"))
        .collect()
}

fn opts(cfg: &Config) -> CheckOptions {
    CheckOptions {
        seed: cfg.seed,
        ..CheckOptions::default()
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

fn cauchy(cfg: &Config) -> Tally {
    let mut t = Tally::default();
    t.pass::<String>("schur cauchy", Ok(kp_cauchy_check(cfg.max_weight)));
    t.pass::<String>("q cauchy", Ok(q_cauchy_check(cfg.max_weight)));
    t
}

fn kp_suite(cfg: &Config) -> Tally {
    let w = cfg.max_weight;
    let o = opts(cfg);
    let tallies: Vec<Tally> = enumerate_partitions(w - 2)
        .into_par_iter()
        .map(|lam| {
            let mut t = Tally::default();
            let chi = schur_poly(&lam);
            t.pass(
                &format!("three-term χ{lam}"),
                kp_three_term_check(&chi, CheckMode::Exact, &o),
            );
            match chi.widen_truncation(w) {
                Ok(wide) => t.pass(&format!("hirota χ{lam}"), kp_hirota_check(&wide)),
                Err(e) => t.expect(false, || format!("χ{lam}: {e}")),
            }
            t.pass(
                &format!("determinant n=2 χ{lam}"),
                kp_determinant_formula_check(&chi, 2, CheckMode::Exact, &o),
            );
            for n in [2, 3] {
                t.pass(
                    &format!("addition n={n} χ{lam}"),
                    kp_addition_formula_check(&chi, n, CheckMode::Exact, &o),
                );
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

fn bkp_suite(cfg: &Config) -> Tally {
    let w = cfg.max_weight;
    let o = opts(cfg);
    let tallies: Vec<Tally> = enumerate_strict(w - 1)
        .into_par_iter()
        .map(|lam| {
            let mut t = Tally::default();
            let q = q_schur_poly(&lam).scale_x(&half());
            t.pass(
                &format!("four-term Q{lam}"),
                bkp_four_term_check(&q, CheckMode::Exact, &o),
            );
            let wide = match q.widen_truncation(w) {
                Ok(wide) => wide,
                Err(e) => {
                    t.expect(false, || format!("Q{lam}: {e}"));
                    return t;
                }
            };
            t.pass(&format!("hirota Q{lam}"), bkp_hirota_check(&wide));
            for n in [3, 4] {
                t.pass(
                    &format!("pfaffian n={n} Q{lam}"),
                    bkp_pfaffian_addition_check(&wide, n, CheckMode::Graded, &o),
                );
            }
            t
        })
        .collect();
    let mut t = tallies.into_iter().fold(Tally::default(), |mut a, b| {
        a.merge(b);
        a
    });
    let ring = SeriesRing::new(VarKind::Odd, w).expect("supported weight");
    let e = GradedSeries::x(&ring, 1)
        .and_then(|x| x.exp())
        .expect("exp of x1");
    t.pass(
        "four-term exp(x1)",
        bkp_four_term_check(&e, CheckMode::Graded, &o),
    );
    t.pass("hirota exp(x1)", bkp_hirota_check(&e));
    t
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-7..=7), rng.random_range(1..=7))
}

pub fn random_kp_seed(rng: &mut ChaCha8Rng) -> KpHookSeed {
    let mut seed = KpHookSeed::new();
    for k in 0..=3 {
        for l in 0..=3 {
            if rng.random_bool(0.6) {
                seed.insert(k, l, small_rational(rng));
            }
        }
    }
    seed
}

pub fn random_bkp_seed(rng: &mut ChaCha8Rng) -> BkpPairSeed {
    let mut seed = BkpPairSeed::new();
    for a in 1..=4 {
        if rng.random_bool(0.7) {
            seed.insert_single(a, small_rational(rng))
                .expect("positive row");
        }
        for b in 1..a {
            if rng.random_bool(0.7) {
                seed.insert_pair(a, b, small_rational(rng))
                    .expect("strict rows");
            }
        }
    }
    seed
}

fn kp_round_trip(cfg: &Config) -> Tally {
    let n = cfg.max_weight + 2;
    let o = opts(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Tally::default();
    for i in 0..5 {
        let seed = random_kp_seed(&mut rng);
        let (table, tau) = giambelli_synthesize_kp(&seed, n);
        t.pass(
            &format!("seed {i} three-term"),
            kp_three_term_check(&tau, CheckMode::Graded, &o),
        );
        t.pass(&format!("seed {i} hirota"), kp_hirota_check(&tau));
        let back = expand_schur(&tau);
        t.expect(back.as_ref() == Ok(&table), || {
            format!("seed {i}: expansion differs from the table")
        });
    }
    // Hook coefficients of e^{x1}.
    let mut seed = KpHookSeed::new();
    for k in 0..=3u32 {
        for l in 0..=3u32 {
            seed.insert(
                k,
                l,
                Rational::binomial(k + l, l) / Rational::factorial(k + l + 1),
            );
        }
    }
    let (table, _) = giambelli_synthesize_kp(&seed, 4);
    let xi = table.get(&Partition::new(vec![2, 2]).expect("partition"));
    t.expect(xi == Rational::new(1, 12), || {
        format!("exp(x1) seed gives ξ(2,2) = {xi}")
    });
    t
}

fn length_three_identity(table: &QTable) -> Result<(), String> {
    let x = |v: &[u32]| table.get(&StrictPartition::new(v.to_vec()).expect("strict"));
    for lam in enumerate_strict(table.max_weight())
        .into_iter()
        .filter(|l| l.len() == 3)
    {
        let &[a, b, c] = lam.parts() else {
            unreachable!()
        };
        let direct =
            &(&(&x(&[a, b]) * &x(&[c])) - &(&x(&[a, c]) * &x(&[b]))) + &(&x(&[a]) * &x(&[b, c]));
        if x(&[a, b, c]) != direct {
            return Err(format!(
                "ξ{lam} = {} but the three-term Pfaffian gives {direct}",
                x(&[a, b, c])
            ));
        }
    }
    Ok(())
}

fn bkp_round_trip(cfg: &Config) -> Tally {
    let n = cfg.max_weight + 2;
    let o = opts(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 1);
    let mut t = Tally::default();
    for i in 0..5 {
        let seed = random_bkp_seed(&mut rng);
        let (table, tau) = giambelli_synthesize_bkp(&seed, n);
        t.pass(
            &format!("seed {i} four-term"),
            bkp_four_term_check(&tau, CheckMode::Graded, &o),
        );
        t.pass(&format!("seed {i} hirota"), bkp_hirota_check(&tau));
        let back = expand_q(&tau);
        t.expect(back.as_ref() == Ok(&table), || {
            format!("seed {i}: expansion differs from the table")
        });
        let entrywise = length_three_identity(&table);
        t.expect(entrywise.is_ok(), || {
            format!("seed {i}: {}", entrywise.unwrap_err())
        });
    }
    t
}

fn negative_controls(cfg: &Config) -> Tally {
    let o = opts(cfg);
    let n = cfg.max_weight.max(6);
    let mut t = Tally::default();

    let chi = schur_poly(&Partition::new(vec![2, 2]).expect("partition"));
    let kp = (&GradedSeries::one(chi.ring()) + &chi)
        .widen_truncation(n)
        .expect("supported weight");
    match expand_schur(&kp)
        .map_err(|e| e.to_string())
        .and_then(|tab| giambelli_verify_kp(&tab).map_err(|e| e.to_string()))
    {
        Ok(r) => {
            let first = r.first_failure().map(|w| w.monomial.clone());
            t.expect(!r.pass && first.as_deref() == Some("(1,0|1,0)"), || {
                format!("giambelli 1+χ(2,2): {r}")
            });
        }
        Err(e) => t.expect(false, || format!("giambelli 1+χ(2,2): {e}")),
    }
    t.fail(
        "three-term 1+χ(2,2)",
        kp_three_term_check(&kp, CheckMode::Exact, &o),
    );
    t.fail("hirota 1+χ(2,2)", kp_hirota_check(&kp));

    let q = q_schur_poly(&StrictPartition::new(vec![3, 2, 1]).expect("strict")).scale_x(&half());
    let bkp = (&GradedSeries::one(q.ring()) + &q)
        .widen_truncation(n)
        .expect("supported weight");
    match expand_q(&bkp)
        .map_err(|e| e.to_string())
        .and_then(|tab| giambelli_verify_bkp(&tab).map_err(|e| e.to_string()))
    {
        Ok(r) => {
            let first = r.first_failure().map(|w| w.monomial.clone());
            t.expect(!r.pass && first.as_deref() == Some("(3,2,1)"), || {
                format!("giambelli 1+Q(3,2,1): {r}")
            });
        }
        Err(e) => t.expect(false, || format!("giambelli 1+Q(3,2,1): {e}")),
    }
    // The graded four-term check only reaches the failing weight at N = 9.
    t.fail(
        "four-term 1+Q(3,2,1)",
        bkp_four_term_check(&bkp, CheckMode::Exact, &o),
    );
    t.fail("hirota 1+Q(3,2,1)", bkp_hirota_check(&bkp));
    t
}

fn lemmas(cfg: &Config) -> Tally {
    let n = cfg.max_weight - 2;
    let mut t = Tally::default();
    for k in [1, 2] {
        t.pass::<String>(&format!("lemma1 n={k}"), Ok(lemma1_check(k, n)));
        t.pass::<String>(&format!("lemma2 n={k}"), Ok(lemma2_check(k, n)));
        t.fail::<String>(
            &format!("lemma1 mutation n={k}"),
            Ok(lemma1_check_variant(k, n, Lemma1Variant::DropLegSign)),
        );
        // With four parameters the Vandermonde prefactor has weight 6, so x
        // first enters at weight 8; the mutation only touches x.
        t.fail::<String>(
            &format!("lemma2 mutation n={k}"),
            Ok(lemma2_check_variant(k, n + 2, Lemma2Variant::FullArgument)),
        );
    }
    t
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-9..=9), rng.random_range(1..=9))
}

fn random_skew(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = random_rational(rng);
            m[j][i] = -&v;
            m[i][j] = v;
        }
    }
    m
}

/// A random ordered list of `len` distinct indices below `n`.
fn random_list(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    (0..len)
        .map(|_| pool.swap_remove(rng.random_range(0..pool.len())))
        .collect()
}

fn linear_algebra(cfg: &Config) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 2);
    let one = Rational::one();
    let mut t = Tally::default();
    for n in 2..=8 {
        for _ in 0..20 {
            let m = random_skew(&mut rng, n);
            let det = determinant(&m, &one).expect("square");
            let pf = if n % 2 == 0 {
                pfaffian(&m, &one).expect("even skew")
            } else {
                Rational::zero()
            };
            t.expect(&pf * &pf == det, || format!("Pf² ≠ det at size {n}"));
        }
    }
    for n in 2..=4usize {
        for _ in 0..10 {
            let cols = 2 * n + 1;
            let a: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..cols).map(|_| random_rational(&mut rng)).collect())
                .collect();
            let k = random_list(&mut rng, cols, n - 1);
            let l = random_list(&mut rng, cols, n + 1);
            let res = det_plucker_residual(&a, &k, &l, &one);
            t.expect(res.as_ref().is_ok_and(|r| r.is_zero()), || {
                format!("determinant Plücker residual {res:?} for K={k:?} L={l:?}")
            });
        }
    }
    for _ in 0..20 {
        let m = random_skew(&mut rng, 8);
        let li = 2 * rng.random_range(0..=3) + 1;
        let lj = 2 * rng.random_range(0..=3) + 1;
        let i = random_list(&mut rng, 8, li);
        let j = random_list(&mut rng, 8, lj);
        let res = pfaffian_plucker_residual(&m, &i, &j, &one);
        t.expect(res.as_ref().is_ok_and(|r| r.is_zero()), || {
            format!("Pfaffian Plücker residual {res:?} for I={i:?} J={j:?}")
        });
    }
    t
}

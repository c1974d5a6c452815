//! Giambelli-type relations between expansion coefficients: synthesis of
//! full tables from hook (KP) or one- and two-row (BKP) data, and
//! verification of given tables.
//!
//! KP: `ξ_(k_1..k_r|l_1..l_r) = det(ξ_(k_i|l_j))`.
//!
//! BKP: `ξ_λ = Pf(P(λ'_i, λ'_j))` over the padded `λ'`, with
//! `P(a, b) = ξ_(a,b)` and `P(a, 0) = ξ_(a)`. This entry normalization is
//! forced by the general-`x` Pfaffian identity together with
//! `ξ_λ = 2^{-l(λ)} Q_λ(∂̃)τ|_0`; a literal extra factor `2^{-n}` in front
//! of the Pfaffian would contradict the two-row case. Reports carry the
//! convention tag [`BKP_CONVENTION`].

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{determinant, pfaffian_upper};
use crate::partitions::{enumerate_partitions, enumerate_strict, Partition, StrictPartition};
use crate::rational::Rational;
use crate::report::{CheckMode, CheckReport, Witness};
use crate::schur_kp::{hook_matrix, resum_schur, schur_hook, schur_poly};
use crate::schur_q::{q_schur_poly, q_two_row, resum_q};
use crate::series::{GradedSeries, SeriesError, VarKind};
use crate::table::{QTable, SchurTable};

pub const BKP_CONVENTION: &str = "eq73-normalized";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GiambelliError {
    #[error("table is not normalized: xi of the empty partition is {0}, expected 1")]
    Normalization(Rational),
    #[error("pair index ({0},{1}) must satisfy a > b >= 1")]
    PairIndex(u32, u32),
    #[error("single-row index must be at least 1")]
    SingleIndex,
    #[error("partition weight {0} exceeds the truncation weight {1}")]
    TooHeavy(u32, u32),
    #[error("{0} check needs a {1} series")]
    WrongKind(&'static str, &'static str),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Hook coefficients `ξ_(k|l)`; `ξ_∅ = 1` is implicit and absent entries
/// are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KpHookSeed {
    hooks: BTreeMap<(u32, u32), Rational>,
}

impl KpHookSeed {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, arm: u32, leg: u32, value: Rational) {
        if value.is_zero() {
            self.hooks.remove(&(arm, leg));
        } else {
            self.hooks.insert((arm, leg), value);
        }
    }

    pub fn get(&self, arm: u32, leg: u32) -> Rational {
        self.hooks
            .get(&(arm, leg))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.hooks.iter()
    }

    /// The hook entries of a table.
    pub fn from_table(table: &SchurTable) -> Self {
        let mut seed = Self::new();
        for (lam, v) in table.nonzero() {
            let f = lam.frobenius();
            if f.rank() == 1 {
                seed.insert(f.arms()[0], f.legs()[0], v.clone());
            }
        }
        seed
    }
}

/// One-row coefficients `ξ_(a)` and two-row coefficients `ξ_(a,b)`;
/// `ξ_∅ = 1` is implicit and absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BkpPairSeed {
    singles: BTreeMap<u32, Rational>,
    pairs: BTreeMap<(u32, u32), Rational>,
}

impl BkpPairSeed {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_single(&mut self, row: u32, value: Rational) -> Result<(), GiambelliError> {
        if row == 0 {
            return Err(GiambelliError::SingleIndex);
        }
        if value.is_zero() {
            self.singles.remove(&row);
        } else {
            self.singles.insert(row, value);
        }
        Ok(())
    }

    pub fn insert_pair(&mut self, a: u32, b: u32, value: Rational) -> Result<(), GiambelliError> {
        if !(a > b && b >= 1) {
            return Err(GiambelliError::PairIndex(a, b));
        }
        if value.is_zero() {
            self.pairs.remove(&(a, b));
        } else {
            self.pairs.insert((a, b), value);
        }
        Ok(())
    }

    pub fn singles(&self) -> impl Iterator<Item = (&u32, &Rational)> {
        self.singles.iter()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.pairs.iter()
    }

    /// Pfaffian entry `P(a, b)`: antisymmetric, zero on the diagonal.
    pub fn entry(&self, a: u32, b: u32) -> Rational {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => Rational::zero(),
            Less => -self.entry(b, a),
            Greater if b == 0 => self.singles.get(&a).cloned().unwrap_or_else(Rational::zero),
            Greater => self
                .pairs
                .get(&(a, b))
                .cloned()
                .unwrap_or_else(Rational::zero),
        }
    }

    /// The one- and two-row entries of a table.
    pub fn from_table(table: &QTable) -> Self {
        let mut seed = Self::new();
        for (lam, v) in table.nonzero() {
            match lam.parts() {
                [a] => seed.insert_single(*a, v.clone()).expect("positive part"),
                [a, b] => seed.insert_pair(*a, *b, v.clone()).expect("strict parts"),
                _ => {}
            }
        }
        seed
    }
}

fn kp_giambelli_value(lam: &Partition, hook: impl Fn(u32, u32) -> Rational) -> Rational {
    let f = lam.frobenius();
    let m = hook_matrix(&f, hook);
    determinant(&m, &Rational::one()).expect("square")
}

fn bkp_pfaffian_value(lam: &StrictPartition, entry: impl Fn(u32, u32) -> Rational) -> Rational {
    let padded = lam.padded();
    let rows = padded.rows();
    let m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&a| rows.iter().map(|&b| entry(a, b)).collect())
        .collect();
    pfaffian_upper(&m, &Rational::one())
}

/// Fills every `|λ| ≤ N` by the determinant rule and resums.
pub fn giambelli_synthesize_kp(seed: &KpHookSeed, n: u32) -> (SchurTable, GradedSeries) {
    let values: Vec<(Partition, Rational)> = enumerate_partitions(n)
        .into_par_iter()
        .map(|lam| {
            let v = if lam.is_empty() {
                Rational::one()
            } else {
                kp_giambelli_value(&lam, |k, l| seed.get(k, l))
            };
            (lam, v)
        })
        .collect();
    let mut table = SchurTable::new(n);
    for (lam, v) in values {
        table.set(lam, v);
    }
    let tau = resum_schur(&table, n);
    (table, tau)
}

/// Fills every strict `|λ| ≤ N` by the Pfaffian rule and resums. Lengths 1
/// and 2 are the seed itself.
pub fn giambelli_synthesize_bkp(seed: &BkpPairSeed, n: u32) -> (QTable, GradedSeries) {
    let values: Vec<(StrictPartition, Rational)> = enumerate_strict(n)
        .into_par_iter()
        .map(|lam| {
            let v = if lam.is_empty() {
                Rational::one()
            } else {
                bkp_pfaffian_value(&lam, |a, b| seed.entry(a, b))
            };
            (lam, v)
        })
        .collect();
    let mut table = QTable::new(n);
    for (lam, v) in values {
        table.set(lam, v);
    }
    let tau = resum_q(&table, n);
    (table, tau)
}

fn check_normalized(empty: Rational) -> Result<(), GiambelliError> {
    if empty.is_one() {
        Ok(())
    } else {
        Err(GiambelliError::Normalization(empty))
    }
}

/// Compares every `ξ_λ` of Frobenius rank at least 2 (absent entries count
/// as zero) with the determinant of its hook entries.
pub fn giambelli_verify_kp(table: &SchurTable) -> Result<CheckReport, GiambelliError> {
    let started = Instant::now();
    check_normalized(table.empty_coefficient())?;
    let n = table.max_weight();
    let mut violations: Vec<(Partition, Rational)> = enumerate_partitions(n)
        .into_par_iter()
        .filter(|lam| lam.frobenius().rank() >= 2)
        .filter_map(|lam| {
            let f = lam.frobenius();
            let expected = determinant(
                &hook_matrix(&f, |k, l| table.get(&Partition::hook(k, l))),
                &Rational::one(),
            )
            .expect("square");
            let r = &table.get(&lam) - &expected;
            (!r.is_zero()).then_some((lam, r))
        })
        .collect();
    violations.sort();
    let mut report = CheckReport::new("kp-giambelli", CheckMode::Graded, Some(n));
    for (lam, r) in violations {
        report.add_failure(Witness {
            monomial: lam.frobenius().to_string(),
            weight: Some(lam.weight()),
            residual: r,
            sample: None,
        });
    }
    Ok(report.finish(started))
}

/// Compares every strict `ξ_λ` with `l(λ) ≥ 3` (absent entries count as
/// zero) with the Pfaffian of its one- and two-row entries.
pub fn giambelli_verify_bkp(table: &QTable) -> Result<CheckReport, GiambelliError> {
    let started = Instant::now();
    check_normalized(table.empty_coefficient())?;
    let n = table.max_weight();
    let seed = BkpPairSeed::from_table(table);
    let mut violations: Vec<(StrictPartition, Rational)> = enumerate_strict(n)
        .into_par_iter()
        .filter(|lam| lam.len() >= 3)
        .filter_map(|lam| {
            let expected = bkp_pfaffian_value(&lam, |a, b| seed.entry(a, b));
            let r = &table.get(&lam) - &expected;
            (!r.is_zero()).then_some((lam, r))
        })
        .collect();
    violations.sort();
    let mut report = CheckReport::new("bkp-giambelli", CheckMode::Graded, Some(n))
        .with_convention(BKP_CONVENTION);
    for (lam, r) in violations {
        report.add_failure(Witness {
            monomial: lam.to_string(),
            weight: Some(lam.weight()),
            residual: r,
            sample: None,
        });
    }
    Ok(report.finish(started))
}

fn require(tau: &GradedSeries, kind: VarKind, check: &'static str) -> Result<(), GiambelliError> {
    if tau.kind() != kind {
        let want = match kind {
            VarKind::All => "KP (all-variable)",
            VarKind::Odd => "BKP (odd-variable)",
        };
        return Err(GiambelliError::WrongKind(check, want));
    }
    Ok(())
}

/// `τ^{r-1} χ_λ(∂̃)τ = det(χ_(k_i|l_j)(∂̃)τ)` as series in `x`, through
/// weight `N - |λ|`.
pub fn giambelli_general_x_kp(
    tau: &GradedSeries,
    lam: &Partition,
) -> Result<CheckReport, GiambelliError> {
    let started = Instant::now();
    require(tau, VarKind::All, "KP general-x Giambelli")?;
    let n = tau.truncation();
    if lam.weight() > n {
        return Err(GiambelliError::TooHeavy(lam.weight(), n));
    }
    let g = n - lam.weight();
    let ring = tau.ring().with_truncation(g)?;
    let d = |p: &GradedSeries| -> Result<GradedSeries, GiambelliError> {
        Ok(GradedSeries::apply_diff_operator(p, tau)?.embed(&ring)?)
    };
    let f = lam.frobenius();
    let r = f.rank();
    let mut entries = Vec::with_capacity(r);
    for &k in f.arms() {
        let row: Result<Vec<_>, _> = f.legs().iter().map(|&l| d(&schur_hook(k, l))).collect();
        entries.push(row?);
    }
    let t = tau.embed(&ring)?;
    let lhs = &t.pow(r.saturating_sub(1) as u32) * &d(&schur_poly(lam))?;
    // Rank 0 is `τ^{-1}·τ = 1`, multiplied through by `τ`.
    let rhs = if r == 0 {
        t
    } else {
        determinant(&entries, &GradedSeries::one(&ring)).expect("square")
    };
    let mut report = CheckReport::new(format!("kp-giambelli-x {f}"), CheckMode::Graded, Some(g));
    report.absorb_residual(&(&lhs - &rhs), Some(g), None);
    Ok(report.finish(started))
}

/// `τ^{n-1} Q_λ(∂̃)τ = Pf(Q_(λ'_i,λ'_j)(∂̃)τ)` as series in `x`, through
/// weight `N - |λ|`, where `2n` is the padded length.
pub fn giambelli_general_x_bkp(
    tau: &GradedSeries,
    lam: &StrictPartition,
) -> Result<CheckReport, GiambelliError> {
    let started = Instant::now();
    require(tau, VarKind::Odd, "BKP general-x Giambelli")?;
    let n = tau.truncation();
    if lam.weight() > n {
        return Err(GiambelliError::TooHeavy(lam.weight(), n));
    }
    let g = n - lam.weight();
    let ring = tau.ring().with_truncation(g)?;
    let d = |p: &GradedSeries| -> Result<GradedSeries, GiambelliError> {
        Ok(GradedSeries::apply_diff_operator(p, tau)?.embed(&ring)?)
    };
    let padded = lam.padded();
    let rows = padded.rows();
    let mut entries = Vec::with_capacity(rows.len());
    for &a in rows {
        let row: Result<Vec<_>, _> = rows
            .iter()
            .map(|&b| {
                if a == b {
                    Ok(GradedSeries::zero(&ring))
                } else {
                    d(&q_two_row(a as i64, b as i64))
                }
            })
            .collect();
        entries.push(row?);
    }
    let t = tau.embed(&ring)?;
    let half = padded.half_len();
    let lhs = &t.pow(half.saturating_sub(1) as u32) * &d(&q_schur_poly(lam))?;
    let rhs = if half == 0 {
        t
    } else {
        pfaffian_upper(&entries, &GradedSeries::one(&ring))
    };
    let mut report = CheckReport::new(format!("bkp-giambelli-x {lam}"), CheckMode::Graded, Some(g))
        .with_convention(BKP_CONVENTION);
    report.absorb_residual(&(&lhs - &rhs), Some(g), None);
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests;

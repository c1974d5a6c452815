//! Schur Q-functions in the odd variables `x_1, x_3, x_5, …`, and expansion
//! of BKP-type series in the basis `Q_λ(x/2)`.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::linalg::{perfect_matchings, pfaffian_upper};
use crate::partitions::{enumerate_strict, normalize_extended_strict, StrictPartition};
use crate::rational::Rational;
use crate::report::{CheckMode, CheckReport, Parameters};
use crate::schur_kp::{subsets, vectors_up_to};
use crate::series::{exp_generating_coeffs, GradedSeries, SeriesRing, VarKind};
use crate::table::{ExpandError, QTable};

fn odd_ring(n: u32) -> SeriesRing {
    SeriesRing::new(VarKind::Odd, n).expect("weight within range")
}

/// `q_0..=q_max` from `exp(2 Σ_{k odd} x_k t^k) = Σ q_r t^r`, in `ring`.
pub fn q_polys(ring: &SeriesRing, max: usize) -> Vec<GradedSeries> {
    let two = Rational::from_integer(2);
    let ts: Vec<GradedSeries> = (1..=max)
        .map(|m| {
            if m % 2 == 1 {
                GradedSeries::x(ring, m).expect("odd index").scale(&two)
            } else {
                GradedSeries::zero(ring)
            }
        })
        .collect();
    exp_generating_coeffs(ring, &ts, max)
}

/// `q_r(x)`; zero for negative `r`.
pub fn q_poly(r: i64) -> GradedSeries {
    if r < 0 {
        return GradedSeries::zero(&odd_ring(0));
    }
    let ring = odd_ring(r as u32);
    q_polys(&ring, r as usize).pop().expect("non-empty")
}

/// `Q_(r,s) = q_r q_s + 2 Σ_{i=1}^{s} (-1)^i q_{r+i} q_{s-i}` for `r > s ≥ 0`,
/// extended antisymmetrically.
pub fn q_two_row(r: i64, s: i64) -> GradedSeries {
    if r < 0 || s < 0 || r == s {
        return GradedSeries::zero(&odd_ring(0));
    }
    if r < s {
        return -&q_two_row(s, r);
    }
    let ring = odd_ring((r + s) as u32);
    let qs = q_polys(&ring, (r + s) as usize);
    two_row_from(&qs, r as usize, s as usize)
}

fn two_row_from(qs: &[GradedSeries], r: usize, s: usize) -> GradedSeries {
    if r == s {
        return GradedSeries::zero(qs[0].ring());
    }
    if r < s {
        return -&two_row_from(qs, s, r);
    }
    let two = Rational::from_integer(2);
    let mut acc = &qs[r] * &qs[s];
    for i in 1..=s {
        let t = (&qs[r + i] * &qs[s - i]).scale(&two);
        acc = if i % 2 == 1 { &acc - &t } else { &acc + &t };
    }
    acc
}

/// `Q_λ = Pf(Q_(λ'_i, λ'_j))` over the padded `λ'`, in a ring truncated at
/// `|λ|`.
pub fn q_schur_poly(lam: &StrictPartition) -> GradedSeries {
    let w = lam.weight();
    let ring = odd_ring(w);
    let qs = q_polys(&ring, w as usize);
    let rows = lam.padded();
    let rows = rows.rows();
    let m: Vec<Vec<GradedSeries>> = rows
        .iter()
        .map(|&a| {
            rows.iter()
                .map(|&b| two_row_from(&qs, a as usize, b as usize))
                .collect()
        })
        .collect();
    pfaffian_upper(&m, &GradedSeries::one(&ring))
}

/// Extended `Q` for an arbitrary integer row list: zero on negative or
/// repeated entries, otherwise skew-symmetric in the rows.
pub fn q_extended(rows: &[i64]) -> GradedSeries {
    let norm = normalize_extended_strict(rows);
    match norm.index {
        None => GradedSeries::zero(&odd_ring(0)),
        Some(lam) => signed(q_schur_poly(&lam), norm.sign),
    }
}

fn signed(s: GradedSeries, sign: i8) -> GradedSeries {
    if sign < 0 {
        -&s
    } else {
        s
    }
}

/// All `Q_λ` with `|λ| ≤ N`, computed once.
#[derive(Clone, Debug)]
pub struct QBasis {
    max_weight: u32,
    polys: BTreeMap<StrictPartition, GradedSeries>,
}

impl QBasis {
    pub fn new(max_weight: u32) -> Self {
        let polys = enumerate_strict(max_weight)
            .into_par_iter()
            .map(|lam| {
                let q = q_schur_poly(&lam);
                (lam, q)
            })
            .collect();
        QBasis { max_weight, polys }
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn get(&self, lam: &StrictPartition) -> Option<&GradedSeries> {
        self.polys.get(lam)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StrictPartition, &GradedSeries)> {
        self.polys.iter()
    }

    pub fn extended(&self, rows: &[i64]) -> GradedSeries {
        let norm = normalize_extended_strict(rows);
        match norm.index {
            None => GradedSeries::zero(&odd_ring(0)),
            Some(lam) => {
                let q = match self.polys.get(&lam) {
                    Some(q) => q.clone(),
                    None => q_schur_poly(&lam),
                };
                signed(q, norm.sign)
            }
        }
    }
}

fn check_odd(tau: &GradedSeries) -> Result<(), ExpandError> {
    if tau.kind() != VarKind::Odd {
        return Err(ExpandError::WrongKind("BKP (odd-variable)"));
    }
    if tau.has_params() || tau.has_y() {
        return Err(ExpandError::HasParams);
    }
    Ok(())
}

fn half_pow(l: usize) -> Rational {
    Rational::new(1, 2).pow(l as i32)
}

/// `ξ_λ = 2^{-l(λ)} Q_λ(∂̃)τ|_{x=0}` for every strict `|λ| ≤ N`.
pub fn expand_q(tau: &GradedSeries) -> Result<QTable, ExpandError> {
    let basis = QBasis::new(tau.truncation());
    expand_q_with(tau, &basis)
}

pub fn expand_q_with(tau: &GradedSeries, basis: &QBasis) -> Result<QTable, ExpandError> {
    check_odd(tau)?;
    let n = tau.truncation().min(basis.max_weight);
    let values: Vec<(StrictPartition, Rational)> = basis
        .polys
        .par_iter()
        .filter(|(lam, _)| lam.weight() <= n)
        .map(|(lam, q)| {
            GradedSeries::pair_at_zero(q, tau).map(|v| (lam.clone(), v * half_pow(lam.len())))
        })
        .collect::<Result<_, _>>()?;
    let mut table = QTable::new(n);
    for (lam, v) in values {
        table.set(lam, v);
    }
    Ok(table)
}

/// `Σ_λ ξ_λ Q_λ(x/2)`, truncated at `n`.
pub fn resum_q(table: &QTable, n: u32) -> GradedSeries {
    let ring = odd_ring(n);
    let half = Rational::new(1, 2);
    let mut acc = GradedSeries::zero(&ring);
    for (lam, v) in table.nonzero() {
        if lam.weight() > n {
            continue;
        }
        let q = q_schur_poly(lam)
            .scale_x(&half)
            .embed(&ring)
            .expect("same kind");
        acc = &acc + &q.scale(v);
    }
    acc
}

/// Which normalization the Q-Cauchy sum uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QCauchyVariant {
    Faithful,
    /// Mutation control: the `2^{-l(λ)}` weights are dropped.
    NoHalfPowers,
}

/// `Σ_{strict |λ|≤N} 2^{-l(λ)} Q_λ(x)Q_λ(y) = exp(2 Σ_{k odd} k x_k y_k)`,
/// compared through combined `(x, y)`-weight `2N`.
pub fn q_cauchy_check(n: u32) -> CheckReport {
    q_cauchy_check_variant(n, QCauchyVariant::Faithful)
}

pub fn q_cauchy_check_variant(n: u32, variant: QCauchyVariant) -> CheckReport {
    let started = Instant::now();
    let ring = odd_ring(2 * n);
    let basis = QBasis::new(n);
    let sum = basis
        .polys
        .par_iter()
        .map(|(lam, q)| {
            let qx = q.embed(&ring).expect("same kind");
            let t = &qx * &qx.swap_xy();
            match variant {
                QCauchyVariant::Faithful => t.scale(&half_pow(lam.len())),
                QCauchyVariant::NoHalfPowers => t,
            }
        })
        .reduce(|| GradedSeries::zero(&ring), |a, b| &a + &b);
    let mut arg = GradedSeries::zero(&ring);
    for k in (1..=n as usize).step_by(2) {
        let term =
            &GradedSeries::x(&ring, k).expect("odd") * &GradedSeries::y(&ring, k).expect("odd");
        arg = &arg + &term.scale(&Rational::from_integer(2 * k as i64));
    }
    let rhs = arg.exp().expect("no constant term");
    let name = match variant {
        QCauchyVariant::Faithful => "q-cauchy",
        QCauchyVariant::NoHalfPowers => "q-cauchy-mutated",
    };
    let mut report = CheckReport::new(name, CheckMode::Graded, Some(2 * n));
    report.absorb_residual(&(&sum - &rhs), Some(2 * n), None);
    report.finish(started)
}

/// Which argument the two-row generating function is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma2Variant {
    Faithful,
    /// Mutation control: `Q(x)` in place of `Q(x/2)`.
    FullArgument,
}

/// Multi-row Q generating function with `2n` formal weight-1 parameters
/// `α_i`, denominators cleared by `D = ∏_{i<j}(α_i + α_j)`:
///
/// `∏_{i<j}(α_i - α_j) · e^{Σ_i Σ_{k odd} x_k α_i^k} = D·Pf(C + H)`
///
/// with `C_ij = (α_i - α_j)/(α_i + α_j)` and
/// `H_ij = Σ_{r,s≥0} Q_(r,s)(x/2) α_i^r α_j^s`. The Pfaffian is expanded
/// over even index subsets; the full-subset term is
/// `Σ Q_(λ_1..λ_2n)(x/2) α^λ`. Checked through combined weight `N`.
pub fn lemma2_check(n: usize, big_n: u32) -> CheckReport {
    lemma2_check_variant(n, big_n, Lemma2Variant::Faithful)
}

pub fn lemma2_check_variant(n: usize, big_n: u32, variant: Lemma2Variant) -> CheckReport {
    let started = Instant::now();
    let m = 2 * n;
    let names: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
    let ring = SeriesRing::with_params(VarKind::Odd, &names, big_n).expect("few parameters");
    let a = |i: usize| GradedSeries::param(&ring, i);
    let one = GradedSeries::one(&ring);
    let diff = |i: usize, j: usize| &a(i) - &a(j);
    let sum = |i: usize, j: usize| &a(i) + &a(j);

    let mut lhs = one.clone();
    for i in 0..m {
        for j in i + 1..m {
            lhs = &lhs * &diff(i, j);
        }
    }
    let mut arg = GradedSeries::zero(&ring);
    for i in 0..m {
        for k in (1..=big_n as usize).step_by(2) {
            arg = &arg + &(&GradedSeries::x(&ring, k).expect("odd") * &a(i).pow(k as u32));
        }
    }
    lhs = &lhs * &arg.exp().expect("no constant term");

    let basis = QBasis::new(big_n);
    let half = Rational::new(1, 2);
    let all: Vec<usize> = (0..m).collect();
    let mut rhs = GradedSeries::zero(&ring);
    for s in subsets(m).into_iter().filter(|s| s.len() % 2 == 0) {
        let sbar: Vec<usize> = all.iter().copied().filter(|i| !s.contains(i)).collect();
        // D · Pf(C[S̄]) by matchings: matched pairs contribute α_i - α_j,
        // every other pair keeps its α_i + α_j.
        let mut cpart = GradedSeries::zero(&ring);
        for (sign, pairs) in perfect_matchings(&sbar) {
            let mut t = one.clone();
            for i in 0..m {
                for j in i + 1..m {
                    t = if pairs.contains(&(i, j)) {
                        &t * &diff(i, j)
                    } else {
                        &t * &sum(i, j)
                    };
                }
            }
            cpart = if sign < 0 { &cpart - &t } else { &cpart + &t };
        }
        // Pf(H[S]) as the extended multi-row sum.
        let hpart = if s.is_empty() {
            one.clone()
        } else {
            let mut acc = GradedSeries::zero(&ring);
            for lam in vectors_up_to(s.len(), big_n) {
                let rows: Vec<i64> = lam.iter().map(|&v| v as i64).collect();
                let q = basis.extended(&rows);
                if q.is_zero() {
                    continue;
                }
                let q = match variant {
                    Lemma2Variant::Faithful => q.scale_x(&half),
                    Lemma2Variant::FullArgument => q,
                };
                let mut term = q.embed(&ring).expect("same kind");
                for (&idx, &e) in s.iter().zip(&lam) {
                    term = &term * &a(idx).pow(e);
                }
                acc = &acc + &term;
            }
            acc
        };
        // Moving S to the front in order.
        let shift: usize = s.iter().enumerate().map(|(k, &i)| i - k).sum();
        let contrib = &cpart * &hpart;
        rhs = if shift % 2 == 1 {
            &rhs - &contrib
        } else {
            &rhs + &contrib
        };
    }
    let name = match variant {
        Lemma2Variant::Faithful => format!("lemma2-n{n}"),
        Lemma2Variant::FullArgument => format!("lemma2-n{n}-mutated"),
    };
    let mut report = CheckReport::new(name, CheckMode::Graded, Some(big_n))
        .with_parameters(Parameters::Formal(names));
    report.absorb_residual(&(&rhs - &lhs), Some(big_n), None);
    report.finish(started)
}

#[cfg(test)]
mod tests;

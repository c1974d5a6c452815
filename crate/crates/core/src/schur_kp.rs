//! Schur functions `χ_λ(x)` in the variables `x_n = p_n/n`, expansion of
//! series in the Schur basis, and the hook generating-function identities.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::linalg::determinant;
use crate::partitions::{
    enumerate_partitions, normalize_extended_frobenius, FrobeniusCoord, Partition, PartitionError,
};
use crate::rational::Rational;
use crate::report::{CheckMode, CheckReport, Parameters};
use crate::series::{exp_generating_coeffs, GradedSeries, SeriesRing, VarKind};
use crate::table::{ExpandError, SchurTable};

fn plain_ring(n: u32) -> SeriesRing {
    SeriesRing::new(VarKind::All, n).expect("weight within range")
}

/// `p_0..=p_max` from `exp(Σ x_m z^m) = Σ p_k z^k`, in `ring`.
pub fn p_polys(ring: &SeriesRing, max: usize) -> Vec<GradedSeries> {
    let ts: Vec<GradedSeries> = (1..=max)
        .map(|m| GradedSeries::x(ring, m).expect("index within range"))
        .collect();
    exp_generating_coeffs(ring, &ts, max)
}

/// `p_k(x)`, homogeneous of weight `k`; zero for negative `k`.
pub fn p_poly(k: i64) -> GradedSeries {
    if k < 0 {
        return GradedSeries::zero(&plain_ring(0));
    }
    let ring = plain_ring(k as u32);
    p_polys(&ring, k as usize).pop().expect("non-empty")
}

/// Jacobi–Trudi determinant `det(p_{λ_i - i + j})`, in a ring truncated at
/// `|λ|`.
pub fn schur_poly(lam: &Partition) -> GradedSeries {
    let w = lam.weight();
    let ring = plain_ring(w);
    let ps = p_polys(&ring, w as usize);
    let l = lam.len();
    let zero = GradedSeries::zero(&ring);
    let m: Vec<Vec<GradedSeries>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let idx = lam.parts()[i] as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        zero.clone()
                    } else {
                        ps[idx as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    determinant(&m, &GradedSeries::one(&ring)).expect("square matrix")
}

/// Hook Schur function `χ_(k|l) = χ_(k+1, 1^l)`.
pub fn schur_hook(arm: u32, leg: u32) -> GradedSeries {
    schur_poly(&Partition::hook(arm, leg))
}

/// Extended Schur function for arbitrary integer Frobenius data: zero for
/// negative or repeated entries, skew-symmetric in arms and in legs.
pub fn schur_extended(arms: &[i64], legs: &[i64]) -> Result<GradedSeries, PartitionError> {
    let norm = normalize_extended_frobenius(arms, legs)?;
    Ok(match norm.index {
        None => GradedSeries::zero(&plain_ring(0)),
        Some(f) => signed(schur_poly(&f.to_partition()), norm.sign),
    })
}

fn signed(s: GradedSeries, sign: i8) -> GradedSeries {
    if sign < 0 {
        -&s
    } else {
        s
    }
}

/// All `χ_λ` with `|λ| ≤ N`, computed once.
#[derive(Clone, Debug)]
pub struct SchurBasis {
    max_weight: u32,
    polys: BTreeMap<Partition, GradedSeries>,
}

impl SchurBasis {
    pub fn new(max_weight: u32) -> Self {
        let polys = enumerate_partitions(max_weight)
            .into_par_iter()
            .map(|lam| {
                let s = schur_poly(&lam);
                (lam, s)
            })
            .collect();
        SchurBasis { max_weight, polys }
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn get(&self, lam: &Partition) -> Option<&GradedSeries> {
        self.polys.get(lam)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &GradedSeries)> {
        self.polys.iter()
    }

    /// Extended `χ` via the cache (falls back to direct computation).
    pub fn extended(&self, arms: &[i64], legs: &[i64]) -> Result<GradedSeries, PartitionError> {
        let norm = normalize_extended_frobenius(arms, legs)?;
        Ok(match norm.index {
            None => GradedSeries::zero(&plain_ring(0)),
            Some(f) => {
                let lam = f.to_partition();
                let s = match self.polys.get(&lam) {
                    Some(s) => s.clone(),
                    None => schur_poly(&lam),
                };
                signed(s, norm.sign)
            }
        })
    }
}

fn check_plain(tau: &GradedSeries, kind: VarKind) -> Result<(), ExpandError> {
    if tau.kind() != kind {
        return Err(ExpandError::WrongKind(match kind {
            VarKind::All => "KP (all-variable)",
            VarKind::Odd => "BKP (odd-variable)",
        }));
    }
    if tau.has_params() || tau.has_y() {
        return Err(ExpandError::HasParams);
    }
    Ok(())
}

/// `ξ_λ = χ_λ(∂̃)τ|_{x=0}` for every `|λ| ≤ N`.
pub fn expand_schur(tau: &GradedSeries) -> Result<SchurTable, ExpandError> {
    let basis = SchurBasis::new(tau.truncation());
    expand_schur_with(tau, &basis)
}

pub fn expand_schur_with(
    tau: &GradedSeries,
    basis: &SchurBasis,
) -> Result<SchurTable, ExpandError> {
    check_plain(tau, VarKind::All)?;
    let n = tau.truncation().min(basis.max_weight);
    let values: Vec<(Partition, Rational)> = basis
        .polys
        .par_iter()
        .filter(|(lam, _)| lam.weight() <= n)
        .map(|(lam, chi)| GradedSeries::pair_at_zero(chi, tau).map(|v| (lam.clone(), v)))
        .collect::<Result<_, _>>()?;
    let mut table = SchurTable::new(n);
    for (lam, v) in values {
        table.set(lam, v);
    }
    Ok(table)
}

/// `Σ_λ ξ_λ χ_λ(x)`, truncated at `n`.
pub fn resum_schur(table: &SchurTable, n: u32) -> GradedSeries {
    let ring = plain_ring(n);
    let mut acc = GradedSeries::zero(&ring);
    for (lam, v) in table.nonzero() {
        if lam.weight() > n {
            continue;
        }
        let chi = schur_poly(lam).embed(&ring).expect("same kind");
        acc = &acc + &chi.scale(v);
    }
    acc
}

/// `Σ_{|λ|≤N} χ_λ(x)χ_λ(y) = exp(Σ n x_n y_n)`, compared through combined
/// `(x, y)`-weight `2N` (every `λ` with `|λ| ≤ N` contributes exactly
/// there).
pub fn kp_cauchy_check(n: u32) -> CheckReport {
    let started = Instant::now();
    let ring = plain_ring(2 * n);
    let basis = SchurBasis::new(n);
    let sum = basis
        .polys
        .par_iter()
        .map(|(_, chi)| {
            let cx = chi.embed(&ring).expect("same kind");
            &cx * &cx.swap_xy()
        })
        .reduce(|| GradedSeries::zero(&ring), |a, b| &a + &b);
    let mut arg = GradedSeries::zero(&ring);
    for m in 1..=n as usize {
        let term =
            &GradedSeries::x(&ring, m).expect("index") * &GradedSeries::y(&ring, m).expect("index");
        arg = &arg + &term.scale(&Rational::from_integer(m as i64));
    }
    let rhs = arg.exp().expect("no constant term");
    let mut report = CheckReport::new("kp-cauchy", CheckMode::Graded, Some(2 * n));
    report.absorb_residual(&(&sum - &rhs), Some(2 * n), None);
    report.finish(started)
}

/// Non-negative integer vectors of length `len` with entry sum `≤ max`.
pub(crate) fn vectors_up_to(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(len: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(len, left - v, cur, out);
            cur.pop();
        }
    }
    rec(len, max, &mut Vec::new(), &mut out);
    out
}

/// Subsets of `0..n` as sorted index lists.
pub(crate) fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

pub(crate) fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !s.contains(i)).collect()
}

/// Which form of the hook generating-function identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma1Variant {
    Faithful,
    /// Mutation control: the `(-1)^{Σl}` sign is dropped.
    DropLegSign,
}

/// Multi-hook generating function with `α_i, β_j` formal weight-1
/// parameters, denominators cleared:
///
/// `∏_{i<j} α_{ij}β_{ji} · e^{Σ ξ(x,β_i) - Σ ξ(x,α_i)} = P·det(C + H)`
///
/// where `P = ∏(β_i - α_j)`, `C_{ij} = 1/(β_i - α_j)` and
/// `H_{ij} = Σ (-1)^l χ_(k|l)(x) α_j^l β_i^k`. The right side is expanded by
/// generalized Laplace over row/column subsets; its full-subset term is the
/// sum `Σ (-1)^{Σl} χ_(k_1..k_n|l_1..l_n)(x) α^l β^k`. Checked through
/// combined weight `N`.
pub fn lemma1_check(n: usize, big_n: u32) -> CheckReport {
    lemma1_check_variant(n, big_n, Lemma1Variant::Faithful)
}

pub fn lemma1_check_variant(n: usize, big_n: u32, variant: Lemma1Variant) -> CheckReport {
    let started = Instant::now();
    let names: Vec<String> = (1..=n)
        .map(|i| format!("a{i}"))
        .chain((1..=n).map(|i| format!("b{i}")))
        .collect();
    let ring = SeriesRing::with_params(VarKind::All, &names, big_n).expect("few parameters");
    let a = |i: usize| GradedSeries::param(&ring, i);
    let b = |i: usize| GradedSeries::param(&ring, n + i);
    let one = GradedSeries::one(&ring);
    let d = |i: usize, j: usize| &b(i) - &a(j);

    let mut lhs = one.clone();
    for i in 0..n {
        for j in i + 1..n {
            lhs = &lhs * &(&(&a(i) - &a(j)) * &(&b(j) - &b(i)));
        }
    }
    let mut xi = GradedSeries::zero(&ring);
    for i in 0..n {
        for m in 1..=(big_n as usize / 2) {
            let xm = GradedSeries::x(&ring, m).expect("index");
            let diff = &b(i).pow(m as u32) - &a(i).pow(m as u32);
            xi = &xi + &(&xm * &diff);
        }
    }
    lhs = &lhs * &xi.exp().expect("no constant term");

    let basis = SchurBasis::new(big_n);
    let mut rhs = GradedSeries::zero(&ring);
    for s in subsets(n) {
        for t in subsets(n).into_iter().filter(|t| t.len() == s.len()) {
            let m = s.len();
            let sign_exp: usize = s.iter().chain(t.iter()).map(|i| i + 1).sum();
            let sb = complement(n, &s);
            let tb = complement(n, &t);
            // P · det C[S̄, T̄] by the Cauchy determinant.
            let mut cauchy = one.clone();
            for p in 0..sb.len() {
                for q in p + 1..sb.len() {
                    cauchy = &cauchy * &(&b(sb[p]) - &b(sb[q]));
                    cauchy = &cauchy * &(&a(tb[q]) - &a(tb[p]));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if !(sb.contains(&i) && tb.contains(&j)) {
                        cauchy = &cauchy * &d(i, j);
                    }
                }
            }
            // det H[S, T] as the extended multi-hook sum.
            let mut hdet = GradedSeries::zero(&ring);
            if m == 0 {
                hdet = one.clone();
            } else if big_n >= m as u32 {
                let budget = (big_n - m as u32) / 2;
                for kl in vectors_up_to(2 * m, budget) {
                    let (ks, ls) = kl.split_at(m);
                    let arms: Vec<i64> = ks.iter().map(|&k| k as i64).collect();
                    let legs: Vec<i64> = ls.iter().map(|&l| l as i64).collect();
                    let chi = basis.extended(&arms, &legs).expect("equal lengths");
                    if chi.is_zero() {
                        continue;
                    }
                    let mut term = chi.embed(&ring).expect("same kind");
                    for (idx, &k) in s.iter().zip(ks) {
                        term = &term * &b(*idx).pow(k);
                    }
                    for (idx, &l) in t.iter().zip(ls) {
                        term = &term * &a(*idx).pow(l);
                    }
                    let leg_sum: u32 = ls.iter().sum();
                    if variant == Lemma1Variant::Faithful && leg_sum % 2 == 1 {
                        term = -&term;
                    }
                    hdet = &hdet + &term;
                }
            }
            let mut contrib = &cauchy * &hdet;
            if sign_exp % 2 == 1 {
                contrib = -&contrib;
            }
            rhs = &rhs + &contrib;
        }
    }
    let name = match variant {
        Lemma1Variant::Faithful => format!("lemma1-n{n}"),
        Lemma1Variant::DropLegSign => format!("lemma1-n{n}-mutated"),
    };
    let mut report = CheckReport::new(name, CheckMode::Graded, Some(big_n))
        .with_parameters(Parameters::Formal(names));
    report.absorb_residual(&(&rhs - &lhs), Some(big_n), None);
    report.finish(started)
}

/// Single-hook shift identity:
/// `τ(x+[β]-[α]) - τ(x) = (β-α)·Σ (-1)^l χ_(k|l)(∂̃)τ(x)·α^l β^k`,
/// with `α, β` formal. Checked through weight `N` of `τ`.
pub fn shift_hook_check(tau: &GradedSeries) -> Result<CheckReport, ExpandError> {
    let started = Instant::now();
    check_plain(tau, VarKind::All)?;
    let n = tau.truncation();
    let ring = SeriesRing::with_params(VarKind::All, &["a", "b"], n)?;
    let t = tau.embed(&ring)?;
    let one = Rational::one();
    let lhs = &t.miwa_shift(1, &one, 1).miwa_shift(0, &one, -1) - &t;
    let a = GradedSeries::param(&ring, 0);
    let b = GradedSeries::param(&ring, 1);
    let mut sum = GradedSeries::zero(&ring);
    for k in 0..n {
        for l in 0..n - k {
            let hook = schur_hook(k, l);
            let d = GradedSeries::apply_diff_operator(&hook, tau)?;
            let mut term = &d.embed(&ring)? * &(&b.pow(k) * &a.pow(l));
            if l % 2 == 1 {
                term = -&term;
            }
            sum = &sum + &term;
        }
    }
    let rhs = &(&b - &a) * &sum;
    let mut report = CheckReport::new("hook-shift", CheckMode::Graded, Some(n))
        .with_parameters(Parameters::Formal(vec!["a".into(), "b".into()]));
    report.absorb_residual(&(&lhs - &rhs), Some(n), None);
    Ok(report.finish(started))
}

/// Frobenius coordinates of `λ` with the hook table look-up `ξ_(k|l)`.
pub(crate) fn hook_matrix<F>(f: &FrobeniusCoord, hook: F) -> Vec<Vec<Rational>>
where
    F: Fn(u32, u32) -> Rational,
{
    f.arms()
        .iter()
        .map(|&k| f.legs().iter().map(|&l| hook(k, l)).collect())
        .collect()
}

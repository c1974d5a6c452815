//! KP and BKP membership tests: Hirota bilinear residues, the three- and
//! four-term equations and the determinant / Pfaffian addition formulae.
//!
//! Every identity is evaluated with denominators cleared, as a polynomial
//! in the parameters. In [`CheckMode::Graded`] the parameters are formal and
//! of weight 1, so truncation error in `τ` stays above the truncation weight
//! `N`. In [`CheckMode::Exact`] they are sampled rationals; this is only
//! sound when `τ` is a genuine polynomial.

use std::cell::RefCell;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::linalg::{determinant, perfect_matchings, LinalgError};
use crate::rational::Rational;
use crate::report::{CheckMode, CheckReport, Parameters};
use crate::series::{GradedSeries, LaurentSeries, SeriesError, SeriesRing, VarKind};

pub const DEFAULT_SEED: u64 = 0x5eed_7a75;
pub const DEFAULT_SAMPLES: usize = 5;
/// Largest numerator magnitude and denominator of a sampled parameter.
pub const SAMPLE_BOUND: i64 = 13;
const RESAMPLE_BUDGET: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("{0} check needs a {1} series")]
    WrongKind(&'static str, &'static str),
    #[error("the series under test must not carry parameters or y variables")]
    HasParams,
    #[error("order {0} is not supported by the {1} check")]
    UnsupportedOrder(usize, &'static str),
    #[error("could not draw admissible parameters in {0} attempts")]
    ResamplingExhausted(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Sampling controls for exact mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
        }
    }
}

fn require(tau: &GradedSeries, kind: VarKind, check: &'static str) -> Result<(), CheckError> {
    if tau.kind() != kind {
        let want = match kind {
            VarKind::All => "KP (all-variable)",
            VarKind::Odd => "BKP (odd-variable)",
        };
        return Err(CheckError::WrongKind(check, want));
    }
    if tau.has_params() || tau.has_y() {
        return Err(CheckError::HasParams);
    }
    Ok(())
}

/// One evaluation context: `τ` and the parameters, either formal or numeric.
struct Env {
    ring: SeriesRing,
    tau: GradedSeries,
    values: Option<Vec<Rational>>,
    /// Miwa coefficient: 1 for KP shifts `[α]`, 2 for BKP shifts `2[α]_o`.
    miwa: Rational,
    cache: RefCell<FxHashMap<Vec<(usize, i32)>, GradedSeries>>,
}

impl Env {
    fn one(&self) -> GradedSeries {
        GradedSeries::one(&self.ring)
    }

    fn param(&self, i: usize) -> GradedSeries {
        match &self.values {
            None => GradedSeries::param(&self.ring, i),
            Some(v) => GradedSeries::constant(&self.ring, v[i].clone()),
        }
    }

    fn diff(&self, i: usize, j: usize) -> GradedSeries {
        &self.param(i) - &self.param(j)
    }

    fn sum(&self, i: usize, j: usize) -> GradedSeries {
        &self.param(i) + &self.param(j)
    }

    fn tau(&self) -> GradedSeries {
        self.tau.clone()
    }

    /// `τ(x + Σ sign·c[α_i])` for the listed `(i, sign)`.
    fn shifted(&self, shifts: &[(usize, i32)]) -> GradedSeries {
        let mut key = shifts.to_vec();
        key.sort_unstable();
        if let Some(s) = self.cache.borrow().get(&key) {
            return s.clone();
        }
        let mut s = self.tau.clone();
        for &(i, sign) in &key {
            s = match &self.values {
                None => s.miwa_shift(i, &self.miwa, sign),
                Some(v) => s.miwa_shift_value(&v[i], &self.miwa, sign),
            };
        }
        self.cache.borrow_mut().insert(key, s.clone());
        s
    }

    fn up(&self, idx: &[usize]) -> GradedSeries {
        let v: Vec<(usize, i32)> = idx.iter().map(|&i| (i, 1)).collect();
        self.shifted(&v)
    }
}

/// Shape of an identity: its parameters, the largest number of `τ` factors
/// in one term, and which parameter tuples are admissible.
struct Spec<'a> {
    name: String,
    kind: VarKind,
    params: Vec<String>,
    factors: u32,
    admissible: &'a (dyn Fn(&[Rational]) -> bool + Sync),
}

fn run<F>(
    spec: Spec<'_>,
    tau: &GradedSeries,
    mode: CheckMode,
    opts: &CheckOptions,
    body: F,
) -> Result<CheckReport, CheckError>
where
    F: Fn(&Env) -> Result<GradedSeries, CheckError> + Sync,
{
    let started = Instant::now();
    let miwa = Rational::from_integer(match spec.kind {
        VarKind::All => 1,
        VarKind::Odd => 2,
    });
    match mode {
        CheckMode::Graded => {
            let n = tau.truncation();
            let ring = SeriesRing::with_params(spec.kind, &spec.params, n)?;
            let env = Env {
                tau: tau.embed(&ring)?,
                ring,
                values: None,
                miwa,
                cache: RefCell::default(),
            };
            let residual = body(&env)?;
            let mut report = CheckReport::new(spec.name, mode, Some(n))
                .with_parameters(Parameters::Formal(spec.params));
            report.absorb_residual(&residual, Some(n), None);
            Ok(report.finish(started))
        }
        CheckMode::Exact => {
            let deg = tau.max_weight();
            let t = spec.factors * deg;
            let ring = SeriesRing::new(spec.kind, t)?;
            let poly = if tau.truncation() >= t {
                tau.truncated(t)
            } else {
                tau.widen_truncation(t)?
            };
            let samples = draw_samples(opts, spec.params.len(), spec.admissible)?;
            let residuals: Vec<GradedSeries> = samples
                .par_iter()
                .map(|values| {
                    let env = Env {
                        ring: ring.clone(),
                        tau: poly.clone(),
                        values: Some(values.clone()),
                        miwa: miwa.clone(),
                        cache: RefCell::default(),
                    };
                    body(&env)
                })
                .collect::<Result<_, _>>()?;
            let recorded = samples
                .iter()
                .map(|v| spec.params.iter().cloned().zip(v.iter().cloned()).collect())
                .collect();
            let mut report = CheckReport::new(spec.name, mode, None)
                .with_parameters(Parameters::Samples(recorded));
            for (s, r) in residuals.iter().enumerate() {
                report.absorb_residual(r, None, Some(s));
            }
            Ok(report.finish(started))
        }
    }
}

fn draw_samples(
    opts: &CheckOptions,
    count: usize,
    admissible: &(dyn Fn(&[Rational]) -> bool + Sync),
) -> Result<Vec<Vec<Rational>>, CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::with_capacity(opts.samples);
    for _ in 0..opts.samples {
        let mut found = None;
        for _ in 0..RESAMPLE_BUDGET {
            let v: Vec<Rational> = (0..count)
                .map(|_| {
                    let p = rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
                    let q = rng.random_range(1..=SAMPLE_BOUND);
                    Rational::new(p, q)
                })
                .collect();
            if admissible(&v) {
                found = Some(v);
                break;
            }
        }
        out.push(found.ok_or(CheckError::ResamplingExhausted(RESAMPLE_BUDGET))?);
    }
    Ok(out)
}

fn distinct(v: &[Rational]) -> bool {
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]))
}

fn distinct_and_sum_free(v: &[Rational]) -> bool {
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j] && !(&v[i] + &v[j]).is_zero()))
}

fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// Three-term equation
/// `α12α34 τ12 τ34 - α13α24 τ13 τ24 + α14α23 τ14 τ23 = 0` with
/// `τij = τ(x + [αi] + [αj])`.
pub fn kp_three_term_check(
    tau: &GradedSeries,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    require(tau, VarKind::All, "three-term")?;
    let spec = Spec {
        name: "kp-three-term".into(),
        kind: VarKind::All,
        params: names("a", 1..=4),
        factors: 2,
        admissible: &distinct,
    };
    run(spec, tau, mode, opts, |e| {
        let term =
            |i, j, k, l| &(&e.diff(i, j) * &e.diff(k, l)) * &(&e.up(&[i, j]) * &e.up(&[k, l]));
        Ok(&(&term(0, 1, 2, 3) - &term(0, 2, 1, 3)) + &term(0, 3, 1, 2))
    })
}

/// Addition formula
/// `Σ_{i=1}^{n+1} (-1)^{i-1} ζ(β_1..β_{n-1}, α_i) ζ(α_1..α̂_i..α_{n+1}) = 0`
/// with `ζ(γ) = ∏_{p<q}(γ_p - γ_q) τ(x + Σ[γ])`. At `n = 2` this is the
/// three-term equation.
pub fn kp_addition_formula_check(
    tau: &GradedSeries,
    n: usize,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    require(tau, VarKind::All, "addition-formula")?;
    if !(2..=4).contains(&n) {
        return Err(CheckError::UnsupportedOrder(n, "KP addition-formula"));
    }
    // Parameters: b1..b_{n-1} then a1..a_{n+1}.
    let mut params = names("b", 1..=n - 1);
    params.extend(names("a", 1..=n + 1));
    let spec = Spec {
        name: format!("kp-addition-n{n}"),
        kind: VarKind::All,
        params,
        factors: 2,
        admissible: &distinct,
    };
    run(spec, tau, mode, opts, |e| {
        let zeta = |g: &[usize]| {
            let mut v = e.up(g);
            for p in 0..g.len() {
                for q in p + 1..g.len() {
                    v = &v * &e.diff(g[p], g[q]);
                }
            }
            v
        };
        let betas: Vec<usize> = (0..n - 1).collect();
        let alphas: Vec<usize> = (n - 1..2 * n).collect();
        let mut acc = GradedSeries::zero(&e.ring);
        for (i, &ai) in alphas.iter().enumerate() {
            let mut left = betas.clone();
            left.push(ai);
            let right: Vec<usize> = alphas.iter().copied().filter(|&a| a != ai).collect();
            let t = &zeta(&left) * &zeta(&right);
            acc = if i % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    })
}

/// Determinant formula, multiplied through by `τ^{n-1} ∏_{i,j}(β_i - α_j)`:
///
/// `τ^{n-1} ∏_{i<j} α_ij β_ji · τ(x + Σ[β] - Σ[α]) = det(c_ij ∏_{k≠j} d_ik)`
///
/// with `c_ij = τ(x + [β_i] - [α_j])` and `d_ik = β_i - α_k`.
pub fn kp_determinant_formula_check(
    tau: &GradedSeries,
    n: usize,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    require(tau, VarKind::All, "determinant-formula")?;
    if !(1..=4).contains(&n) {
        return Err(CheckError::UnsupportedOrder(n, "KP determinant-formula"));
    }
    let mut params = names("a", 1..=n);
    params.extend(names("b", 1..=n));
    let admissible = move |v: &[Rational]| {
        let (a, b) = v.split_at(n);
        distinct(a) && distinct(b) && a.iter().all(|x| !b.contains(x))
    };
    let spec = Spec {
        name: format!("kp-determinant-n{n}"),
        kind: VarKind::All,
        params,
        factors: n as u32,
        admissible: &admissible,
    };
    run(spec, tau, mode, opts, |e| {
        let a = |i: usize| i;
        let b = |i: usize| n + i;
        let mut lhs = e.tau().pow(n as u32 - 1);
        for i in 0..n {
            for j in i + 1..n {
                lhs = &lhs * &(&e.diff(a(i), a(j)) * &e.diff(b(j), b(i)));
            }
        }
        let mut all: Vec<(usize, i32)> = (0..n).map(|i| (b(i), 1)).collect();
        all.extend((0..n).map(|i| (a(i), -1)));
        lhs = &lhs * &e.shifted(&all);
        let m: Vec<Vec<GradedSeries>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut c = e.shifted(&[(b(i), 1), (a(j), -1)]);
                        for k in (0..n).filter(|&k| k != j) {
                            c = &c * &e.diff(b(i), a(k));
                        }
                        c
                    })
                    .collect()
            })
            .collect();
        let rhs = determinant(&m, &e.one())?;
        Ok(&lhs - &rhs)
    })
}

/// Four-term equation, multiplied through by `∏_{i<j}(α_i + α_j)`:
///
/// `α12α13α23 τ τ123 = α23 α̃12 α̃13 τ1 τ23 - α13 α̃12 α̃23 τ2 τ13
///  + α12 α̃13 α̃23 τ3 τ12`, with `τ_S = τ(x + 2Σ_{i∈S}[α_i]_o)` and
/// `α̃ij = α_i + α_j`.
pub fn bkp_four_term_check(
    tau: &GradedSeries,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    require(tau, VarKind::Odd, "four-term")?;
    let spec = Spec {
        name: "bkp-four-term".into(),
        kind: VarKind::Odd,
        params: names("a", 1..=3),
        factors: 2,
        admissible: &distinct_and_sum_free,
    };
    run(spec, tau, mode, opts, |e| {
        let lhs =
            &(&(&e.diff(0, 1) * &e.diff(0, 2)) * &e.diff(1, 2)) * &(&e.tau() * &e.up(&[0, 1, 2]));
        let term = |i: usize, j: usize, k: usize| {
            // τ_i τ_jk with prefactor α_jk α̃_ij α̃_ik.
            let pre = &(&e.diff(j, k) * &e.sum(i, j)) * &e.sum(i, k);
            &pre * &(&e.up(&[i]) * &e.up(&[j, k]))
        };
        let rhs = &(&term(0, 1, 2) - &term(1, 0, 2)) + &term(2, 0, 1);
        Ok(&lhs - &rhs)
    })
}

/// Pfaffian addition formula, multiplied through by `∏_{i<j} α_ij` and the
/// power of `τ`:
///
/// `∏ α_ij · τ^p · τ_{1..n} = Σ_M sgn(M) ∏_{(0,j)∈M} τ_j
///  ∏_{(i,j)∈M, i≥1} α_ij τ_ij ∏_{(i,j)∉M} α̃_ij`
///
/// over perfect matchings `M` of `{0,1,..,n}` (n odd, `p = (n-1)/2`) or of
/// `{1,..,n}` (n even, `p = (n-2)/2`). At `n = 3` this is the four-term
/// equation.
pub fn bkp_pfaffian_addition_check(
    tau: &GradedSeries,
    n: usize,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    require(tau, VarKind::Odd, "pfaffian-addition")?;
    if !(2..=6).contains(&n) {
        return Err(CheckError::UnsupportedOrder(n, "BKP pfaffian-addition"));
    }
    let p = if n % 2 == 1 { (n - 1) / 2 } else { (n - 2) / 2 };
    let spec = Spec {
        name: format!("bkp-pfaffian-addition-n{n}"),
        kind: VarKind::Odd,
        params: names("a", 1..=n),
        factors: (p as u32 + 1).max(n.div_ceil(2) as u32),
        admissible: &distinct_and_sum_free,
    };
    run(spec, tau, mode, opts, |e| {
        // Row 0 is the border row; parameter of row r ≥ 1 is r - 1.
        let mut lhs = &e.tau().pow(p as u32) * &e.up(&(0..n).collect::<Vec<_>>());
        for i in 0..n {
            for j in i + 1..n {
                lhs = &lhs * &e.diff(i, j);
            }
        }
        let rows: Vec<usize> = if n % 2 == 1 {
            (0..=n).collect()
        } else {
            (1..=n).collect()
        };
        let mut rhs = GradedSeries::zero(&e.ring);
        for (sign, pairs) in perfect_matchings(&rows) {
            let mut t = e.one();
            for &(r, s) in &pairs {
                t = if r == 0 {
                    &t * &e.up(&[s - 1])
                } else {
                    &t * &(&e.diff(r - 1, s - 1) * &e.up(&[r - 1, s - 1]))
                };
            }
            for i in 1..=n {
                for j in i + 1..=n {
                    if !pairs.contains(&(i, j)) {
                        t = &t * &e.sum(i - 1, j - 1);
                    }
                }
            }
            rhs = if sign < 0 { &rhs - &t } else { &rhs + &t };
        }
        Ok(&lhs - &rhs)
    })
}

/// Coefficient of `k^e` in `exp(-2 Σ y_m k^m) · τ(x-y-c[k⁻¹]) · τ(x+y+c[k⁻¹])`,
/// with `k⁻¹` realized as a weight-1 parameter.
fn bilinear_coefficient(
    tau: &GradedSeries,
    c: &Rational,
    e: i32,
) -> Result<GradedSeries, CheckError> {
    let n = tau.truncation();
    let kind = tau.kind();
    let ring = SeriesRing::with_params(kind, &["z"], n)?;
    let t = tau.embed(&ring)?;
    let minus = t.shift_by_y(-1).miwa_shift(0, c, -1);
    let plus = t.shift_by_y(1).miwa_shift(0, c, 1);
    let integrand = LaurentSeries::from_inverse_param(&(&minus * &plus), 0)?;
    let minus_two = Rational::from_integer(-2);
    let ts: Vec<GradedSeries> = (1..=n as usize)
        .map(|m| match GradedSeries::y(&ring, m) {
            Ok(y) => y.scale(&minus_two),
            Err(_) => GradedSeries::zero(&ring),
        })
        .collect();
    let weight = LaurentSeries::exp_xi(&ring, &ts)?;
    Ok(weight.product_coefficient(&integrand, e)?)
}

/// KP bilinear identity: the `k^{-1}` coefficient of
/// `e^{-2ξ(y,k)} τ(x-y-[k⁻¹]) τ(x+y+[k⁻¹])` vanishes. Exact through
/// `(x, y)`-weight `N - 1`.
pub fn kp_hirota_check(tau: &GradedSeries) -> Result<CheckReport, CheckError> {
    let started = Instant::now();
    require(tau, VarKind::All, "KP Hirota")?;
    let g = tau.truncation().saturating_sub(1);
    let ring = tau.ring().with_truncation(g)?;
    let residual = bilinear_coefficient(tau, &Rational::one(), -1)?.embed(&ring)?;
    let mut report = CheckReport::new("kp-hirota", CheckMode::Graded, Some(g));
    report.absorb_residual(&residual, Some(g), None);
    Ok(report.finish(started))
}

/// BKP bilinear identity: the `k^0` coefficient of
/// `e^{-2ξ̃(y,k)} τ(x-y-2[k⁻¹]_o) τ(x+y+2[k⁻¹]_o)` equals `τ(x-y)τ(x+y)`.
/// Exact through `(x, y)`-weight `N - 1`.
pub fn bkp_hirota_check(tau: &GradedSeries) -> Result<CheckReport, CheckError> {
    let started = Instant::now();
    require(tau, VarKind::Odd, "BKP Hirota")?;
    let g = tau.truncation().saturating_sub(1);
    let ring = tau.ring().with_truncation(g)?;
    let lhs = bilinear_coefficient(tau, &Rational::from_integer(2), 0)?.embed(&ring)?;
    let rhs = (&tau.shift_by_y(-1) * &tau.shift_by_y(1)).embed(&ring)?;
    let residual = lhs.checked_sub(&rhs)?;
    let mut report = CheckReport::new("bkp-hirota", CheckMode::Graded, Some(g));
    report.absorb_residual(&residual, Some(g), None);
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests;

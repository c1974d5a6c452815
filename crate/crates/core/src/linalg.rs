//! Division-free determinants and Pfaffians over commutative rings.
//!
//! The truncated series ring has nilpotents, so nothing here divides.
//! Determinants use a subset-memoized Laplace expansion up to 6×6 and the
//! Berkowitz algorithm above that; Pfaffians use first-row expansion
//! memoized on the set of remaining indices.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::rational::Rational;
use crate::series::{GradedSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("pfaffian needs even dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("matrix dimension {0} is too large")]
    TooLarge(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The commutative-ring operations the algorithms need.
pub trait RingElem: Clone {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn zero_like(&self) -> Self;
}

impl RingElem for Rational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
}

impl RingElem for GradedSeries {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        GradedSeries::zero(self.ring())
    }
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize, LinalgError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(LinalgError::NotSquare);
    }
    if n > 24 {
        return Err(LinalgError::TooLarge(n));
    }
    Ok(n)
}

/// Determinant of a square matrix; `one` is the unit of the ring (returned
/// for the empty matrix).
pub fn determinant<T: RingElem>(m: &[Vec<T>], one: &T) -> Result<T, LinalgError> {
    let n = check_square(m)?;
    Ok(match n {
        0 => one.clone(),
        1 => m[0][0].clone(),
        2..=6 => laplace(m, one),
        _ => berkowitz(m, one),
    })
}

/// Sum over permutations built row by row; `f[mask]` is the signed sum for
/// the first `popcount(mask)` rows placed in the columns of `mask`.
pub(crate) fn laplace<T: RingElem>(m: &[Vec<T>], one: &T) -> T {
    let n = m.len();
    let zero = one.zero_like();
    let mut f: Vec<Option<T>> = vec![None; 1 << n];
    f[0] = Some(one.clone());
    for mask in 0usize..(1 << n) {
        let Some(cur) = f[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            return cur;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 || m[row][j].is_zero_elem() {
                continue;
            }
            // Columns already used that lie to the right of j are inversions.
            let inversions = (mask >> (j + 1)).count_ones();
            let mut term = cur.times(&m[row][j]);
            if inversions % 2 == 1 {
                term = term.negated();
            }
            let next = mask | (1 << j);
            f[next] = Some(match f[next].take() {
                Some(acc) => acc.plus(&term),
                None => term,
            });
        }
    }
    zero
}

/// Berkowitz: characteristic polynomial by successive Toeplitz products.
pub(crate) fn berkowitz<T: RingElem>(a: &[Vec<T>], one: &T) -> T {
    let n = a.len();
    let zero = one.zero_like();
    let mut v = vec![one.clone(), a[0][0].negated()];
    for r in 1..n {
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(a[r][r].negated());
        let mut s: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        for k in 0..r {
            let mut dot = zero.clone();
            for (i, si) in s.iter().enumerate() {
                if !a[r][i].is_zero_elem() && !si.is_zero_elem() {
                    dot = dot.plus(&a[r][i].times(si));
                }
            }
            t.push(dot.negated());
            if k + 1 < r {
                s = (0..r)
                    .map(|i| {
                        let mut acc = zero.clone();
                        for (j, sj) in s.iter().enumerate() {
                            if !a[i][j].is_zero_elem() && !sj.is_zero_elem() {
                                acc = acc.plus(&a[i][j].times(sj));
                            }
                        }
                        acc
                    })
                    .collect();
            }
        }
        let next: Vec<T> = (0..r + 2)
            .map(|i| {
                let mut acc = zero.clone();
                for j in 0..=i.min(r) {
                    if !t[i - j].is_zero_elem() && !v[j].is_zero_elem() {
                        acc = acc.plus(&t[i - j].times(&v[j]));
                    }
                }
                acc
            })
            .collect();
        v = next;
    }
    if n.is_multiple_of(2) {
        v[n].clone()
    } else {
        v[n].negated()
    }
}

/// Pfaffian of an even-dimensional skew-symmetric matrix. Only the strict
/// upper triangle is read; skew-symmetry is validated first.
pub fn pfaffian<T: RingElem + PartialEq>(m: &[Vec<T>], one: &T) -> Result<T, LinalgError> {
    let n = check_square(m)?;
    if n % 2 == 1 {
        return Err(LinalgError::OddDimension(n));
    }
    for i in 0..n {
        if !m[i][i].is_zero_elem() {
            return Err(LinalgError::NotSkew(i, i));
        }
        for j in i + 1..n {
            if m[j][i] != m[i][j].negated() {
                return Err(LinalgError::NotSkew(j, i));
            }
        }
    }
    Ok(pfaffian_upper(m, one))
}

/// Pfaffian using only entries `m[i][j]` with `i < j`, no validation.
pub fn pfaffian_upper<T: RingElem>(m: &[Vec<T>], one: &T) -> T {
    let n = m.len();
    if n == 0 {
        return one.clone();
    }
    let mut memo: FxHashMap<u32, T> = FxHashMap::default();
    pf_rec(m, ((1u64 << n) - 1) as u32, one, &mut memo)
}

fn pf_rec<T: RingElem>(m: &[Vec<T>], mask: u32, one: &T, memo: &mut FxHashMap<u32, T>) -> T {
    if mask == 0 {
        return one.clone();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut acc = one.zero_like();
    let mut pos = 0;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        pos += 1;
        if m[i][j].is_zero_elem() {
            continue;
        }
        let sub = pf_rec(m, rest & !(1 << j), one, memo);
        if sub.is_zero_elem() {
            continue;
        }
        let term = m[i][j].times(&sub);
        acc = if pos % 2 == 1 {
            acc.plus(&term)
        } else {
            acc.minus(&term)
        };
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Determinant of series entries, checking that all share one ring.
pub fn det_series(
    m: &[Vec<GradedSeries>],
    one: &GradedSeries,
) -> Result<GradedSeries, LinalgError> {
    for row in m {
        for e in row {
            if e.ring() != one.ring() {
                e.checked_add(one)?;
            }
        }
    }
    determinant(m, one)
}

/// Pfaffian of series entries, checking that all share one ring.
pub fn pfaffian_series(
    m: &[Vec<GradedSeries>],
    one: &GradedSeries,
) -> Result<GradedSeries, LinalgError> {
    for row in m {
        for e in row {
            if e.ring() != one.ring() {
                e.checked_add(one)?;
            }
        }
    }
    pfaffian(m, one)
}

/// Perfect matchings of `idx` with their Pfaffian signs, so that
/// `Pf(M[idx]) = Σ sign · ∏ M[i][j]` over the returned pairs.
pub fn perfect_matchings(idx: &[usize]) -> Vec<(i8, Vec<(usize, usize)>)> {
    if idx.is_empty() {
        return vec![(1, Vec::new())];
    }
    if idx.len() % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let first = idx[0];
    for p in 1..idx.len() {
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(q, _)| q + 1 != p)
            .map(|(_, &v)| v)
            .collect();
        let sign: i8 = if p % 2 == 1 { 1 } else { -1 };
        for (s, mut pairs) in perfect_matchings(&rest) {
            pairs.insert(0, (first, idx[p]));
            out.push((sign * s, pairs));
        }
    }
    out
}

/// Principal submatrix on `idx`, in the given order (repeats allowed).
pub fn principal_submatrix<T: Clone>(m: &[Vec<T>], idx: &[usize]) -> Vec<Vec<T>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

/// Signed sum of products of complementary maximal minors,
/// `Σ_i (-1)^i Δ(K, l_i)·Δ(L \ l_i)`, for an `n × m` matrix `a`, a list `k`
/// of `n-1` columns and a list `l` of `n+1` columns. Vanishes identically.
pub fn det_plucker_residual<T: RingElem>(
    a: &[Vec<T>],
    k: &[usize],
    l: &[usize],
    one: &T,
) -> Result<T, LinalgError> {
    let n = a.len();
    if k.len() + 1 != n || l.len() != n + 1 {
        return Err(LinalgError::NotSquare);
    }
    let minor = |cols: &[usize]| -> Result<T, LinalgError> {
        let sub: Vec<Vec<T>> = a
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        determinant(&sub, one)
    };
    let mut acc = one.zero_like();
    for i in 0..l.len() {
        let mut left = k.to_vec();
        left.push(l[i]);
        let right: Vec<usize> = l
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &c)| c)
            .collect();
        let term = minor(&left)?.times(&minor(&right)?);
        acc = if i % 2 == 0 {
            acc.plus(&term)
        } else {
            acc.minus(&term)
        };
    }
    Ok(acc)
}

/// Pfaffian Plücker relation for odd-length index lists `I`, `J`:
/// `Σ_l (-1)^l Pf(I, j_l)·Pf(J \ j_l) + Σ_k (-1)^k Pf(I \ i_k)·Pf(J, i_k)`,
/// where `Pf(list)` is the Pfaffian of the principal submatrix in list order.
pub fn pfaffian_plucker_residual<T: RingElem>(
    m: &[Vec<T>],
    i: &[usize],
    j: &[usize],
    one: &T,
) -> Result<T, LinalgError> {
    if i.len().is_multiple_of(2) || j.len().is_multiple_of(2) {
        return Err(LinalgError::OddDimension(i.len()));
    }
    let pf = |idx: &[usize]| pfaffian_upper(&principal_submatrix(m, idx), one);
    let without = |v: &[usize], p: usize| -> Vec<usize> {
        v.iter()
            .enumerate()
            .filter(|&(q, _)| q != p)
            .map(|(_, &x)| x)
            .collect()
    };
    let with = |v: &[usize], x: usize| -> Vec<usize> {
        let mut out = v.to_vec();
        out.push(x);
        out
    };
    let mut acc = one.zero_like();
    for (p, &jl) in j.iter().enumerate() {
        let term = pf(&with(i, jl)).times(&pf(&without(j, p)));
        // (-1)^l with l 1-based
        acc = if p % 2 == 0 {
            acc.minus(&term)
        } else {
            acc.plus(&term)
        };
    }
    for (p, &ik) in i.iter().enumerate() {
        let term = pf(&without(i, p)).times(&pf(&with(j, ik)));
        acc = if p % 2 == 0 {
            acc.minus(&term)
        } else {
            acc.plus(&term)
        };
    }
    Ok(acc)
}
